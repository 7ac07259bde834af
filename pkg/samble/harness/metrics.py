from typing import Union

import numpy as np
from scipy.spatial import cKDTree

from ..binsampler.types import SampleResult
from ..geometry.types import PointCloud
from ..internal.errors import MissingMaskError, TooFewPointsError
from .types import SyntheticShape

SampleLike = Union[SampleResult, np.ndarray]


def _indices(sample: SampleLike) -> np.ndarray:
    if isinstance(sample, SampleResult):
        return sample.indices
    return np.asarray(sample, dtype=np.int64)


def metric_uniformity(sample: SampleLike, cloud: PointCloud) -> float:
    """Coefficient of variation of each sampled point's distance to its nearest sampled peer.

    0 for perfectly even spacing; scale-free.
    """
    idx = _indices(sample)
    if idx.shape[0] < 2:
        raise TooFewPointsError(2, idx.shape[0])
    pts = cloud.points[idx]
    dist, _ = cKDTree(pts).query(pts, k=2)
    nearest = dist[:, 1]
    mean = nearest.mean()
    if mean == 0.0:
        return 0.0
    return float(nearest.std() / mean)


def metric_chamfer(sample: SampleLike, cloud: PointCloud) -> float:
    """Mean distance from every input point to its nearest sampled point."""
    idx = _indices(sample)
    if idx.shape[0] < 1:
        raise TooFewPointsError(1, 0)
    dist, _ = cKDTree(cloud.points[idx]).query(cloud.points, k=1)
    return float(np.mean(dist))


def metric_edge_recall(sample: SampleLike, shape: SyntheticShape) -> float:
    """Fraction of the shape's edge points present in the sample."""
    if shape.edge_mask is None or shape.edge_count == 0:
        raise MissingMaskError(shape.id)
    idx = _indices(sample)
    return float(shape.edge_mask[idx].sum()) / shape.edge_count
