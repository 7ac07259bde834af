from enum import Enum
from typing import Optional

import numpy as np

from ..internal.errors import EmptyCloudError, ShapeMismatchError, InvalidKError


class CloudFormat(Enum):
    XYZ = "xyz"
    PLY_ASCII = "ply-ascii"


class NeighborSearch(Enum):
    EXHAUSTIVE = "exhaustive"
    GRID = "grid"


class FpsStart(Enum):
    FIRST = "first"
    SEEDED = "seeded"


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class PointCloud:
    """Ordered 3D points with optional per-point feature rows.

    Arrays are copied and made read-only, so a cloud can be shared across threads.
    """

    def __init__(
        self,
        points,
        features=None,
        id: str = "",
    ):
        pts = np.array(points, dtype=np.float64)
        if pts.size == 0:
            raise EmptyCloudError(id)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ShapeMismatchError("points must be an N x 3 array, got shape %s" % (pts.shape,))
        if not np.all(np.isfinite(pts)):
            raise ShapeMismatchError("point coordinates must be finite")
        self.points = _frozen(pts)

        self.features: Optional[np.ndarray] = None
        if features is not None:
            feats = np.array(features, dtype=np.float64)
            if feats.ndim == 1:
                feats = feats[:, None]
            if feats.shape[0] != pts.shape[0]:
                raise ShapeMismatchError(
                    "feature rows (%d) must match point count (%d)" % (feats.shape[0], pts.shape[0])
                )
            self.features = _frozen(feats)
        self.id = id

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def representation(self) -> np.ndarray:
        """Rows attended to and searched over: features when present, else coordinates."""
        return self.features if self.features is not None else self.points

    def with_points(self, points) -> "PointCloud":
        return PointCloud(points, features=self.features, id=self.id)

    def subset(self, indices) -> "PointCloud":
        idx = np.asarray(indices, dtype=np.int64)
        feats = self.features[idx] if self.features is not None else None
        return PointCloud(self.points[idx], features=feats, id=self.id)


class NeighborTable:
    """Row o lists the k nearest neighbors of point o, itself first."""

    def __init__(self, indices, k: Optional[int] = None):
        idx = np.array(indices, dtype=np.int64)
        if idx.ndim != 2:
            raise ShapeMismatchError("neighbor indices must be an N x k matrix")
        n, width = idx.shape
        if k is not None and k != width:
            raise ShapeMismatchError("declared k=%d but rows hold %d entries" % (k, width))
        if width < 1 or width > n:
            raise InvalidKError(width, n)
        self.indices = _frozen(idx)
        self.k = width

    @property
    def n(self) -> int:
        return self.indices.shape[0]
