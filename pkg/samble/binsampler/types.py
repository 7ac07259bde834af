from enum import Enum
from typing import Optional

import numpy as np

from ..internal.errors import ShapeMismatchError

EPSILON = 1e-8


class SamplingPolicy(Enum):
    TOP_M = "top-m"
    PRIOR = "prior"
    BIN = "bin"
    RANDOM = "random"
    FPS = "fps"
    VOXEL = "voxel"


class InBinPolicy(Enum):
    PRIOR = "prior"
    TOP_M = "top-m"


class ReluOrder(Enum):
    AFTER_MEAN = "after"
    BEFORE_MEAN = "before"


class OmegaMode(Enum):
    TOKENS = "tokens"
    UNIFORM = "uniform"


class BoundaryMode(Enum):
    ADAPTIVE = "adaptive"
    FROZEN = "frozen"


class SampleResult:
    """Selected original-point indices with aligned scores and bins.

    scores is NaN and bins is -1 for samplers that do not score points.
    """

    def __init__(
        self,
        indices,
        n: int,
        policy: SamplingPolicy,
        seed: Optional[int] = None,
        scores=None,
        bins=None,
        shortfall: bool = False,
    ):
        idx = np.asarray(indices, dtype=np.int64)
        if idx.ndim != 1:
            raise ShapeMismatchError("sample indices must be a flat sequence")
        if idx.size and (idx.min() < 0 or idx.max() >= n):
            raise ShapeMismatchError("sample indices must lie in [0, %d)" % n)
        if np.unique(idx).size != idx.size:
            raise ShapeMismatchError("sample indices must be distinct")
        self.indices = idx
        self.n = n
        self.policy = policy
        self.seed = seed
        self.scores = np.full(idx.size, np.nan) if scores is None else np.asarray(scores, dtype=np.float64)
        self.bins = np.full(idx.size, -1, dtype=np.int64) if bins is None else np.asarray(bins, dtype=np.int64)
        if self.scores.shape != idx.shape or self.bins.shape != idx.shape:
            raise ShapeMismatchError("scores and bins must align with indices")
        self.shortfall = shortfall

    @property
    def m(self) -> int:
        return self.indices.shape[0]

    def index_set(self) -> frozenset:
        return frozenset(int(i) for i in self.indices)


class AllocationState:
    """Working state of the kappa allocation loop."""

    def __init__(self, omega: np.ndarray, beta: np.ndarray, m: int, epsilon: float = EPSILON):
        self.beta = beta
        self.kappa = np.zeros(beta.shape[0], dtype=np.int64)
        self.x = omega * beta + epsilon
        self.remaining = m
        self.scale = 0.0
        self.epsilon = epsilon
        self.passes = 0
        self.ideal = np.zeros(beta.shape[0], dtype=np.float64)
        self.repaired_overshoot = False
        self.used_fallback = False


class BinModel:
    def __init__(
        self,
        boundaries,
        counts,
        weights,
        allocations,
        gamma: float,
    ):
        self.boundaries = np.asarray(boundaries, dtype=np.float64)
        self.counts = np.asarray(counts, dtype=np.int64)
        self.weights = np.asarray(weights, dtype=np.float64)
        self.allocations = np.asarray(allocations, dtype=np.int64)
        self.gamma = gamma
        n_b = self.counts.shape[0]
        if self.boundaries.shape[0] != n_b - 1:
            raise ShapeMismatchError("expected %d boundaries for %d bins" % (n_b - 1, n_b))
        if self.weights.shape[0] != n_b or self.allocations.shape[0] != n_b:
            raise ShapeMismatchError("weights and allocations must have one entry per bin")

    @property
    def n_b(self) -> int:
        return self.counts.shape[0]

    @property
    def ratios(self) -> np.ndarray:
        out = np.zeros(self.n_b, dtype=np.float64)
        nonempty = self.counts > 0
        out[nonempty] = self.allocations[nonempty] / self.counts[nonempty]
        return out

    @property
    def distinct_boundaries(self) -> np.ndarray:
        """Boundaries with coinciding neighbors collapsed; the bins between them are empty."""
        if self.boundaries.size == 0:
            return self.boundaries
        keep = np.concatenate(([True], np.diff(self.boundaries) != 0))
        return self.boundaries[keep]
