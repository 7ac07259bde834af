from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from ..geometry.types import PointCloud
from ..internal.errors import ShapeMismatchError


class ShapeGenerator(Enum):
    GRID2D = "grid2d"
    CIRCLE = "circle"
    CUBE_SHELL = "cube-shell"
    L_BRACKET = "L-bracket"


class SyntheticShape:
    """A generated cloud with the analytic edge mask of its generator."""

    def __init__(
        self,
        generator: ShapeGenerator,
        params: Dict[str, Any],
        cloud: PointCloud,
        edge_mask: Optional[np.ndarray] = None,
    ):
        self.generator = generator
        self.params = dict(params)
        self.cloud = cloud
        self.edge_mask: Optional[np.ndarray] = None
        if edge_mask is not None:
            mask = np.array(edge_mask, dtype=bool)
            if mask.shape != (cloud.n,):
                raise ShapeMismatchError("edge mask must have one entry per point")
            mask.setflags(write=False)
            self.edge_mask = mask

    @property
    def id(self) -> str:
        return self.cloud.id

    @property
    def edge_count(self) -> int:
        return 0 if self.edge_mask is None else int(self.edge_mask.sum())


class BenchRecord:
    def __init__(
        self,
        shape_id: str,
        sampler: str,
        m: int,
        uniformity: float,
        chamfer: float,
        edge_recall: Optional[float],
        millis: float = 0.0,
    ):
        self.shape_id = shape_id
        self.sampler = sampler
        self.m = m
        self.uniformity = uniformity
        self.chamfer = chamfer
        self.edge_recall = edge_recall
        self.millis = millis


class BenchReport:
    """Benchmark rows in (shape, sampler, M) order."""

    def __init__(self, records: List[BenchRecord], seed: int, include_timing: bool = False):
        self.records = records
        self.seed = seed
        self.include_timing = include_timing

    def __len__(self) -> int:
        return len(self.records)
