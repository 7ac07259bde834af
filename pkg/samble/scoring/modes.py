import logging
from typing import Union

import numpy as np

from ..attention.types import DenseAttentionMap, SamVariant, SparseAttentionMap
from ..internal.errors import IncompatibleModeError
from .types import INSERT_COMPATIBLE_MODES, IndexingMode, ScoreVector

logger = logging.getLogger(__name__)

# Relative spread below which a score vector is treated as constant.
_CONSTANT_RTOL = 1e-12


def score(
    attention: Union[DenseAttentionMap, SparseAttentionMap],
    mode: Union[IndexingMode, str] = IndexingMode.SPARSE_COLUMN_SQUARE_DIVIDED,
    strict: bool = True,
) -> ScoreVector:
    """Point-wise sampling scores under one of the seven indexing modes.

    Modes i/ii read a dense map, iii-vii a sparse one. Insert-variant maps reject
    mode iv unless strict is False, since their rows always sum to 1.
    """
    mode = IndexingMode(mode)
    if isinstance(attention, DenseAttentionMap):
        if not mode.needs_dense:
            raise IncompatibleModeError(mode.value, "a dense attention map")
        return ScoreVector(_dense_scores(attention.values, mode), mode)

    if mode.needs_dense:
        raise IncompatibleModeError(mode.value, "a sparse attention map")
    if strict and attention.variant == SamVariant.INSERT and mode not in INSERT_COMPATIBLE_MODES:
        raise IncompatibleModeError(mode.value, "an insert-based sparse attention map")
    return ScoreVector(_sparse_scores(attention, mode), mode)


def _dense_scores(values: np.ndarray, mode: IndexingMode) -> np.ndarray:
    if mode == IndexingMode.ROW_STD:
        return values.std(axis=1)
    return values.sum(axis=0)


def _sparse_scores(sam: SparseAttentionMap, mode: IndexingMode) -> np.ndarray:
    if mode == IndexingMode.SPARSE_ROW_STD:
        return sam.row_values().std(axis=1)
    if mode == IndexingMode.SPARSE_ROW_SUM:
        return sam.row_sums()

    column_sums = sam.column_sums()
    if mode == IndexingMode.SPARSE_COLUMN_SUM:
        return column_sums
    counts = sam.column_counts.astype(np.float64)
    # self-inclusion puts every point in its own row, so n_o >= 1
    assert np.all(counts >= 1), "sparse map has an unselected column"
    if mode == IndexingMode.SPARSE_COLUMN_AVERAGE:
        return column_sums / counts
    return column_sums / (counts * counts)


def normalize_scores(raw: np.ndarray) -> np.ndarray:
    """Z-score with the population std, shifted to mean 0.5; constant input maps to 0.5."""
    raw = np.asarray(raw, dtype=np.float64)
    mean = raw.mean()
    std = raw.std()
    if std <= _CONSTANT_RTOL * max(1.0, abs(mean)):
        if std > 0.0:
            logger.warning("score spread %.3g is at rounding level; treating scores as constant", std)
        return np.full(raw.shape, 0.5)
    return (raw - mean) / std + 0.5


def normalize(scores: ScoreVector) -> ScoreVector:
    return ScoreVector(scores.raw, scores.mode, normalized=normalize_scores(scores.raw))
