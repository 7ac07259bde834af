import logging

import numpy as np
from scipy.special import softmax

from ..geometry.types import NeighborTable, PointCloud
from ..internal.errors import ShapeMismatchError
from .types import DenseAttentionMap, SamVariant, SparseAttentionMap, TokenEnergyMatrix, WeightSet

logger = logging.getLogger(__name__)


def _inputs(cloud: PointCloud, ws: WeightSet) -> np.ndarray:
    x = cloud.representation()
    ws.check_input(x)
    return x


def _energies(queries: np.ndarray, keys: np.ndarray, ws: WeightSet) -> np.ndarray:
    return (queries @ ws.w_q) @ (keys @ ws.w_k).T / np.sqrt(ws.d)


def global_map(cloud: PointCloud, ws: WeightSet) -> DenseAttentionMap:
    """Row softmax of (X W_Q)(X W_K)^T / sqrt(d), every point attending to every point."""
    x = _inputs(cloud, ws)
    return DenseAttentionMap(softmax(_energies(x, x, ws), axis=1))


def local_rows(cloud: PointCloud, table: NeighborTable, ws: WeightSet) -> np.ndarray:
    """N x k softmax rows over each point's neighbors, keys on relative offsets."""
    x = _inputs(cloud, ws)
    if table.n != x.shape[0]:
        raise ShapeMismatchError("neighbor table covers %d points, cloud has %d" % (table.n, x.shape[0]))
    queries = x @ ws.w_q
    offsets = x[table.indices] - x[:, None, :]
    keys = offsets @ ws.w_k
    energies = np.einsum("nd,nkd->nk", queries, keys) / np.sqrt(ws.d)
    return softmax(energies, axis=1)


def carve_sam(dense: DenseAttentionMap, table: NeighborTable) -> SparseAttentionMap:
    """Keep the dense values at each row's neighbor columns, zero elsewhere."""
    if dense.n != table.n:
        raise ShapeMismatchError(
            "dense map is %dx%d, neighbor table covers %d points" % (dense.n, dense.n, table.n)
        )
    rows = np.arange(table.n)[:, None]
    values = dense.values[rows, table.indices]
    sam = SparseAttentionMap.from_rows(table.indices, values, SamVariant.CARVE)
    logger.debug("carved sparse map: N=%d k=%d", sam.n, sam.k)
    return sam


def insert_sam(local: np.ndarray, table: NeighborTable) -> SparseAttentionMap:
    """Place local softmax rows at the neighbor columns of an empty N x N map."""
    local = np.asarray(local, dtype=np.float64)
    if local.shape != table.indices.shape:
        raise ShapeMismatchError(
            "local rows %s do not match neighbor table %s" % (local.shape, table.indices.shape)
        )
    sam = SparseAttentionMap.from_rows(table.indices, local, SamVariant.INSERT)
    logger.debug("inserted sparse map: N=%d k=%d", sam.n, sam.k)
    return sam


def token_energies(cloud: PointCloud, ws: WeightSet) -> TokenEnergyMatrix:
    """Energies of every point against [points; bin tokens].

    Tokens join the keys only, so the point block stays N x N. The softmax runs
    over all N + n_b columns before the split, so point-block rows sum below 1.
    """
    if ws.n_b < 1:
        raise ShapeMismatchError("token energies need at least one bin token")
    x = _inputs(cloud, ws)
    n = x.shape[0]
    energies = _energies(x, np.vstack([x, ws.bin_tokens]), ws)
    post = softmax(energies, axis=1)
    return TokenEnergyMatrix(energies[:, :n], energies[:, n:], post[:, :n])
