import logging
from typing import Optional, Union

import numpy as np
from scipy.special import softmax

from ..attention.types import TokenEnergyMatrix
from ..internal.errors import InvalidMError, InvalidTauError, ShapeMismatchError
from ..scoring.types import ScoreVector
from .types import ReluOrder, SampleResult, SamplingPolicy

logger = logging.getLogger(__name__)

RngLike = Union[int, None, np.random.Generator]


def _rng(seed: RngLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _values(scores: Union[ScoreVector, np.ndarray]) -> np.ndarray:
    if isinstance(scores, ScoreVector):
        return scores.values()
    return np.asarray(scores, dtype=np.float64)


def _check_tau(tau: float) -> None:
    if not tau > 0.0:
        raise InvalidTauError(tau)


def selection_probabilities(scores, tau: float) -> np.ndarray:
    """softmax(a / tau): the single-draw probability of each point."""
    _check_tau(tau)
    return softmax(_values(scores) / tau)


def in_bin_sample(indices, scores, kappa: int, tau: float, seed: RngLike = None) -> np.ndarray:
    """kappa distinct members of one bin, drawn without replacement with softmax(a/tau) priors.

    Gumbel-perturbed log-priors ranked top-kappa; this has the same law as drawing
    one at a time and renormalizing over the remaining members.
    """
    _check_tau(tau)
    indices = np.asarray(indices, dtype=np.int64)
    values = _values(scores)
    if values.shape != indices.shape:
        raise ShapeMismatchError("bin has %d members but %d scores" % (indices.size, values.size))
    if kappa < 0 or kappa > indices.size:
        raise InvalidMError(kappa, indices.size)
    rng = _rng(seed)
    if kappa == 0:
        return indices[:0]
    keys = values / tau + rng.gumbel(size=indices.size)
    if kappa == indices.size:
        return indices.copy()
    order = np.argsort(-keys, kind="stable")
    return indices[order[:kappa]]


def top_indices(indices, scores, kappa: int) -> np.ndarray:
    """kappa highest-scored members; ties go to the smaller index."""
    indices = np.asarray(indices, dtype=np.int64)
    values = _values(scores)
    order = np.lexsort((indices, -values))
    return indices[order[:kappa]]


def sample_top_m(scores, m: int) -> SampleResult:
    values = _values(scores)
    n = values.shape[0]
    if m < 1 or m > n:
        raise InvalidMError(m, n)
    chosen = top_indices(np.arange(n), values, m)
    return SampleResult(chosen, n, SamplingPolicy.TOP_M, scores=values[chosen])


def sample_prior(scores, m: int, tau: float, seed: Optional[int] = None) -> SampleResult:
    """Prior-based sampling over the whole cloud treated as a single bin."""
    values = _values(scores)
    n = values.shape[0]
    if m < 1 or m > n:
        raise InvalidMError(m, n)
    chosen = in_bin_sample(np.arange(n), values, m, tau, np.random.default_rng(seed))
    return SampleResult(
        chosen, n, SamplingPolicy.PRIOR, seed=seed, scores=values[chosen], bins=np.zeros(m, dtype=np.int64)
    )


def bin_weights(
    energies: Union[TokenEnergyMatrix, np.ndarray],
    bins: np.ndarray,
    beta: np.ndarray,
    relu_order: Union[ReluOrder, str] = ReluOrder.AFTER_MEAN,
) -> np.ndarray:
    """Per-bin sampling weight: ReLU of the mean pre-softmax token energy over the bin's points.

    With relu_order=before the ReLU is applied per point before the mean. Empty bins get 0.
    """
    relu_order = ReluOrder(relu_order)
    if isinstance(energies, TokenEnergyMatrix):
        block = energies.token_block
    else:
        block = np.asarray(energies, dtype=np.float64)
    bins = np.asarray(bins, dtype=np.int64)
    beta = np.asarray(beta, dtype=np.int64)
    n_b = beta.shape[0]
    if block.ndim != 2 or block.shape[1] != n_b:
        raise ShapeMismatchError("token block has shape %s, expected N x %d" % (block.shape, n_b))
    if bins.shape[0] != block.shape[0]:
        raise ShapeMismatchError("%d bin ids for %d token rows" % (bins.shape[0], block.shape[0]))

    own = block[np.arange(bins.shape[0]), bins]
    if relu_order == ReluOrder.BEFORE_MEAN:
        own = np.maximum(own, 0.0)
    sums = np.bincount(bins, weights=own, minlength=n_b)
    omega = np.zeros(n_b, dtype=np.float64)
    nonempty = beta > 0
    omega[nonempty] = sums[nonempty] / beta[nonempty]
    if relu_order == ReluOrder.AFTER_MEAN:
        omega = np.maximum(omega, 0.0)
    return omega
