from enum import Enum
from typing import Optional

import numpy as np


class IndexingMode(Enum):
    ROW_STD = "i"
    COLUMN_SUM = "ii"
    SPARSE_ROW_STD = "iii"
    SPARSE_ROW_SUM = "iv"
    SPARSE_COLUMN_SUM = "v"
    SPARSE_COLUMN_AVERAGE = "vi"
    SPARSE_COLUMN_SQUARE_DIVIDED = "vii"

    @property
    def needs_dense(self) -> bool:
        return self in (IndexingMode.ROW_STD, IndexingMode.COLUMN_SUM)


# Modes whose result stays informative when every stored row sums to 1.
INSERT_COMPATIBLE_MODES = frozenset(
    {
        IndexingMode.SPARSE_ROW_STD,
        IndexingMode.SPARSE_COLUMN_SUM,
        IndexingMode.SPARSE_COLUMN_AVERAGE,
        IndexingMode.SPARSE_COLUMN_SQUARE_DIVIDED,
    }
)


class ScoreVector:
    def __init__(self, raw, mode: IndexingMode, normalized=None):
        self.raw = np.asarray(raw, dtype=np.float64)
        self.mode = mode
        self.normalized: Optional[np.ndarray] = (
            None if normalized is None else np.asarray(normalized, dtype=np.float64)
        )

    def __len__(self) -> int:
        return self.raw.shape[0]

    def values(self) -> np.ndarray:
        """Normalized scores when available, raw otherwise."""
        return self.normalized if self.normalized is not None else self.raw
