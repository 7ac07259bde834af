import logging
from typing import Optional, Union

import numpy as np

from ..binsampler.types import SamplingPolicy, SampleResult
from ..internal.errors import InvalidCellError, InvalidMError, SambleError
from .neighbors import pairwise_sq_distances
from .types import FpsStart, PointCloud

logger = logging.getLogger(__name__)

SEEDED_START = FpsStart.SEEDED.value


def _check_m(m: int, n: int) -> None:
    if m < 1 or m > n:
        raise InvalidMError(m, n)


def sample_random(cloud: PointCloud, m: int, seed: int) -> SampleResult:
    """M distinct indices drawn uniformly without replacement."""
    _check_m(m, cloud.n)
    rng = np.random.default_rng(seed)
    indices = rng.choice(cloud.n, size=m, replace=False)
    return SampleResult(indices, cloud.n, SamplingPolicy.RANDOM, seed=seed)


def sample_fps(
    cloud: PointCloud,
    m: int,
    start: Union[int, str, FpsStart] = 0,
    seed: Optional[int] = None,
) -> SampleResult:
    """Greedy farthest point sampling; ties go to the smaller index.

    start is a point index, or "seeded" to draw the first point from seed;
    FpsStart.FIRST means index 0.
    """
    n = cloud.n
    _check_m(m, n)
    if isinstance(start, FpsStart):
        start = SEEDED_START if start == FpsStart.SEEDED else 0
    if start == SEEDED_START:
        first = int(np.random.default_rng(seed).integers(n))
    else:
        first = int(start)
        if first < 0 or first >= n:
            raise SambleError("FPS start index %d outside [0, %d)" % (first, n))
    x = cloud.points
    selected = np.empty(m, dtype=np.int64)
    selected[0] = first
    min_d2 = pairwise_sq_distances(x[first : first + 1], x)[0]
    min_d2[first] = -np.inf
    for i in range(1, m):
        nxt = int(np.argmax(min_d2))
        selected[i] = nxt
        np.minimum(min_d2, pairwise_sq_distances(x[nxt : nxt + 1], x)[0], out=min_d2)
        min_d2[nxt] = -np.inf
    return SampleResult(selected, n, SamplingPolicy.FPS, seed=seed)


def sample_voxel(cloud: PointCloud, cell: float, m_target: int, seed: int = 0) -> SampleResult:
    """One representative per occupied cubic cell, the point nearest the cell's centroid.

    Excess representatives are randomly thinned to m_target; a shortage is flagged.
    """
    if not cell > 0:
        raise InvalidCellError(cell)
    if m_target < 1:
        raise InvalidMError(m_target, cloud.n)
    x = cloud.points
    keys = np.floor(x / cell).astype(np.int64)
    _, cell_of, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
    cell_of = cell_of.ravel()
    n_cells = counts.shape[0]

    centroids = np.zeros((n_cells, 3), dtype=np.float64)
    np.add.at(centroids, cell_of, x)
    centroids /= counts[:, None]
    offset = x - centroids[cell_of]
    d2 = (offset * offset).sum(axis=1)

    # lexsort keys: last is primary -> cell, then distance, then index
    order = np.lexsort((np.arange(x.shape[0]), d2, cell_of))
    first_in_cell = np.ones(order.shape[0], dtype=bool)
    first_in_cell[1:] = cell_of[order[1:]] != cell_of[order[:-1]]
    reps = np.sort(order[first_in_cell])

    shortfall = False
    if reps.shape[0] > m_target:
        rng = np.random.default_rng(seed)
        reps = np.sort(rng.choice(reps, size=m_target, replace=False))
    elif reps.shape[0] < m_target:
        shortfall = True
        logger.warning(
            "voxel grid with cell %g kept %d representatives, fewer than the %d requested",
            cell,
            reps.shape[0],
            m_target,
        )
    return SampleResult(reps, cloud.n, SamplingPolicy.VOXEL, seed=seed, shortfall=shortfall)
