import logging
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from ..internal.errors import InvalidKError
from .types import NeighborSearch, NeighborTable, PointCloud

logger = logging.getLogger(__name__)

_ROW_CHUNK = 1024
# Relative slack on the grid stopping radius so cell-hash rounding never admits a miss.
_GRID_SLACK = 1e-9
# Past these, _knn_grid hands the cloud to the exhaustive search.
_GRID_MAX_CELLS_PER_POINT = 2
_GRID_MAX_K_SHARE = 0.25


def pairwise_sq_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances, accumulated per coordinate.

    Every (i, j) entry goes through the same float operations whatever else is in a
    or b, so exhaustive and grid searches see identical values.
    """
    out = np.zeros((a.shape[0], b.shape[0]), dtype=np.float64)
    for c in range(a.shape[1]):
        diff = a[:, c, None] - b[None, :, c]
        out += diff * diff
    return out


def _nearest_in_row(d2: np.ndarray, candidates: np.ndarray, k: int) -> np.ndarray:
    # candidates ascend by index, so a stable sort breaks distance ties to the smaller index
    order = np.argsort(d2, kind="stable")
    return candidates[order[:k]]


def knn(
    cloud: PointCloud,
    k: int,
    search: Union[NeighborSearch, str] = NeighborSearch.EXHAUSTIVE,
    cell: Optional[float] = None,
) -> NeighborTable:
    """k nearest neighbors per point, the point itself first, ties to the smaller index."""
    n = cloud.n
    if k < 1 or k > n:
        raise InvalidKError(k, n)
    search = NeighborSearch(search)
    x = cloud.representation()
    if search == NeighborSearch.GRID:
        if x.shape[1] == 3:
            return NeighborTable(_knn_grid(x, k, cell), k)
        logger.debug("grid search needs 3D rows, got width %d; using exhaustive search", x.shape[1])
    return NeighborTable(_knn_exhaustive(x, k), k)


def _knn_exhaustive(x: np.ndarray, k: int) -> np.ndarray:
    n = x.shape[0]
    out = np.empty((n, k), dtype=np.int64)
    for start in range(0, n, _ROW_CHUNK):
        stop = min(start + _ROW_CHUNK, n)
        d2 = pairwise_sq_distances(x[start:stop], x)
        d2[np.arange(stop - start), np.arange(start, stop)] = -1.0
        if k == n:
            out[start:stop] = np.argsort(d2, axis=1, kind="stable")
            continue
        kth = np.partition(d2, k - 1, axis=1)[:, k - 1]
        for row in range(stop - start):
            cand = np.flatnonzero(d2[row] <= kth[row])
            out[start + row] = _nearest_in_row(d2[row, cand], cand, k)
    return out


def _default_cell(x: np.ndarray, k: int) -> float:
    extent = float(np.ptp(x, axis=0).max())
    if extent == 0.0:
        return 1.0
    per_axis = max(1, int(np.ceil((x.shape[0] / float(k)) ** (1.0 / 3.0))))
    return extent / per_axis


def _shell(radius: int) -> List[Tuple[int, int, int]]:
    """Lattice offsets at Chebyshev distance exactly radius, face cells only."""
    if radius == 0:
        return [(0, 0, 0)]
    full = range(-radius, radius + 1)
    inner = range(-radius + 1, radius)
    out = [(s, b, c) for s in (-radius, radius) for b in full for c in full]
    out += [(a, s, c) for a in inner for s in (-radius, radius) for c in full]
    out += [(a, b, s) for a in inner for b in inner for s in (-radius, radius)]
    return out


def _knn_grid(x: np.ndarray, k: int, cell: Optional[float]) -> np.ndarray:
    n = x.shape[0]
    size = cell if cell is not None and cell > 0 else _default_cell(x, k)
    keys = np.floor((x - x.min(axis=0)) / size).astype(np.int64)
    top = keys.max(axis=0)
    cells = (int(top[0]) + 1) * (int(top[1]) + 1) * (int(top[2]) + 1)
    if cells > _GRID_MAX_CELLS_PER_POINT * n or k > _GRID_MAX_K_SHARE * n:
        logger.debug("grid knn: %d cells for %d points at k=%d; using exhaustive search", cells, n, k)
        return _knn_exhaustive(x, k)
    buckets: Dict[Tuple[int, int, int], List[int]] = {}
    for i, key in enumerate(map(tuple, keys)):
        buckets.setdefault(key, []).append(i)
    logger.debug("grid knn: %d points in %d cells of edge %g", n, len(buckets), size)

    shells: Dict[int, List[Tuple[int, int, int]]] = {}
    out = np.empty((n, k), dtype=np.int64)
    for o in range(n):
        center = keys[o]
        collected: List[int] = []
        radius = 0
        while True:
            offsets = shells.setdefault(radius, _shell(radius))
            for off in offsets:
                members = buckets.get((center[0] + off[0], center[1] + off[1], center[2] + off[2]))
                if members:
                    collected.extend(members)
            covers_all = bool(np.all(center - radius <= 0) and np.all(center + radius >= top))
            if len(collected) >= k:
                cand = np.array(sorted(collected), dtype=np.int64)
                d2 = pairwise_sq_distances(x[o : o + 1], x[cand])[0]
                d2[cand == o] = -1.0
                chosen = _nearest_in_row(d2, cand, k)
                kth = d2[np.searchsorted(cand, chosen[-1])]
                bound = (radius * size) ** 2 * (1.0 - _GRID_SLACK)
                if covers_all or kth < bound:
                    out[o] = chosen
                    break
            elif covers_all:
                raise InvalidKError(k, len(collected))
            radius += 1
    return out


def neighbor_frequency(table: NeighborTable) -> np.ndarray:
    """How many neighbor rows each point appears in (n_o); sums to N*k."""
    return np.bincount(table.indices.ravel(), minlength=table.n).astype(np.int64)
