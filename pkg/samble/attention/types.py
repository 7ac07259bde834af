from enum import Enum
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix

from ..internal.errors import DimMismatchError, ShapeMismatchError


class SamVariant(Enum):
    CARVE = "carve"
    INSERT = "insert"


class WeightSet:
    """Query/key projections plus bin-token embeddings.

    bin_tokens live in input space and are projected through w_k like point rows.
    """

    def __init__(
        self,
        w_q,
        w_k,
        bin_tokens=None,
        seed: Optional[int] = None,
        source: str = "",
    ):
        self.w_q = np.array(w_q, dtype=np.float64)
        self.w_k = np.array(w_k, dtype=np.float64)
        if self.w_q.ndim != 2 or self.w_q.shape != self.w_k.shape:
            raise ShapeMismatchError(
                "W_Q and W_K must be d_in x d matrices of equal shape, got %s and %s"
                % (self.w_q.shape, self.w_k.shape)
            )
        d_in, d = self.w_q.shape
        if d_in < 1 or d < 1:
            raise ShapeMismatchError("weight dimensions must be >= 1")
        if bin_tokens is None or np.size(bin_tokens) == 0:
            tokens = np.zeros((0, d_in), dtype=np.float64)
        else:
            tokens = np.array(bin_tokens, dtype=np.float64)
            if tokens.ndim != 2:
                raise ShapeMismatchError("bin tokens must be an n_b x d_in matrix")
        if tokens.shape[1] != d_in:
            raise DimMismatchError(d_in, tokens.shape[1], "bin token width")
        for name, m in (("W_Q", self.w_q), ("W_K", self.w_k), ("bin_tokens", tokens)):
            if not np.all(np.isfinite(m)):
                raise ShapeMismatchError("%s contains non-finite entries" % name)
        self.bin_tokens = tokens
        for m in (self.w_q, self.w_k, self.bin_tokens):
            m.setflags(write=False)
        self.seed = seed
        self.source = source

    @property
    def d_in(self) -> int:
        return self.w_q.shape[0]

    @property
    def d(self) -> int:
        return self.w_q.shape[1]

    @property
    def n_b(self) -> int:
        return self.bin_tokens.shape[0]

    @classmethod
    def zeros(cls, d_in: int, d: int, n_b: int) -> "WeightSet":
        """All-zero weights: every energy is 0, so every softmax row is uniform."""
        return cls(np.zeros((d_in, d)), np.zeros((d_in, d)), np.zeros((n_b, d_in)), source="zeros")

    def check_input(self, x: np.ndarray) -> None:
        if x.shape[1] != self.d_in:
            raise DimMismatchError(self.d_in, x.shape[1])


class DenseAttentionMap:
    """N x N attention values.

    Maps from global_map are row-stochastic; the point block of a token-augmented
    softmax is not, its rows sum to slightly less than 1.
    """

    def __init__(self, values):
        vals = np.array(values, dtype=np.float64)
        if vals.ndim != 2 or vals.shape[0] != vals.shape[1]:
            raise ShapeMismatchError("dense attention map must be square, got %s" % (vals.shape,))
        vals.setflags(write=False)
        self.values = vals

    @property
    def n(self) -> int:
        return self.values.shape[0]


class SparseAttentionMap:
    """Row-compressed N x N map with exactly k stored cells per row."""

    def __init__(self, matrix: csr_matrix, k: int, variant: SamVariant):
        n = matrix.shape[0]
        if matrix.shape != (n, n):
            raise ShapeMismatchError("sparse attention map must be square")
        if matrix.nnz != n * k or not np.array_equal(np.diff(matrix.indptr), np.full(n, k)):
            raise ShapeMismatchError("every row must store exactly k=%d cells" % k)
        self.matrix = matrix
        self.k = k
        self.variant = variant
        self.column_counts = np.bincount(matrix.indices, minlength=n).astype(np.int64)
        self.column_counts.setflags(write=False)

    @classmethod
    def from_rows(cls, columns: np.ndarray, values: np.ndarray, variant: SamVariant) -> "SparseAttentionMap":
        n, k = columns.shape
        indptr = np.arange(0, n * k + 1, k, dtype=np.int64)
        matrix = csr_matrix(
            (np.ascontiguousarray(values, dtype=np.float64).ravel(), columns.ravel().copy(), indptr),
            shape=(n, n),
        )
        return cls(matrix, k, variant)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def row_values(self) -> np.ndarray:
        """Stored values as an N x k matrix, in neighbor-table order."""
        return self.matrix.data.reshape(self.n, self.k)

    def row_sums(self) -> np.ndarray:
        return self.row_values().sum(axis=1)

    def column_sums(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=0)).ravel()

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


class TokenEnergyMatrix:
    """Energies of points against [points; bin tokens], split into two blocks."""

    def __init__(self, point_block, token_block, post_softmax_point_block):
        self.point_block = np.asarray(point_block, dtype=np.float64)
        self.token_block = np.asarray(token_block, dtype=np.float64)
        self.post_softmax_point_block = np.asarray(post_softmax_point_block, dtype=np.float64)
        n = self.point_block.shape[0]
        if self.point_block.shape != (n, n) or self.post_softmax_point_block.shape != (n, n):
            raise ShapeMismatchError("point blocks must be N x N")
        if self.token_block.ndim != 2 or self.token_block.shape[0] != n:
            raise ShapeMismatchError("token block must have N rows")

    @property
    def n(self) -> int:
        return self.point_block.shape[0]

    @property
    def n_b(self) -> int:
        return self.token_block.shape[1]

    def point_map(self) -> DenseAttentionMap:
        return DenseAttentionMap(self.post_softmax_point_block)
