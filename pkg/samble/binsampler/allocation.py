import logging

import numpy as np

from ..internal.errors import InfeasibleError, InvalidMError, LengthMismatchError, SambleError
from .types import EPSILON, AllocationState

logger = logging.getLogger(__name__)


def _round_half_away(values: np.ndarray) -> np.ndarray:
    # inputs are non-negative here
    return np.floor(values + 0.5).astype(np.int64)


def _check_inputs(m: int, omega: np.ndarray, beta: np.ndarray) -> None:
    if omega.shape != beta.shape or omega.ndim != 1:
        raise LengthMismatchError("omega has %d entries, beta has %d" % (omega.size, beta.size))
    if np.any(beta < 0):
        raise SambleError("bin counts must be non-negative")
    if not np.all(np.isfinite(omega)) or np.any(omega < 0):
        raise SambleError("bin weights must be finite and non-negative")
    available = int(beta.sum())
    if m < 1:
        raise InvalidMError(m, available)
    if m > available:
        raise InfeasibleError(m, available)


def run_allocation(m: int, omega, beta, epsilon: float = EPSILON) -> AllocationState:
    """Turn bin weights and counts into integer per-bin sample counts summing to m.

    Proportional passes with saturation at the bin size, at most n_b of them. A pass
    that adds nothing, or an exhausted pass budget, hands the remainder out one unit
    at a time to unsaturated bins in descending working-weight order. A rounding
    overshoot is taken back from the bins furthest above their unrounded share.
    """
    omega = np.asarray(omega, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.int64)
    _check_inputs(m, omega, beta)

    state = AllocationState(omega, beta, m, epsilon)
    n_b = beta.shape[0]
    while state.remaining > 0 and state.passes < n_b:
        total = state.x.sum()
        if total <= 0.0:
            break
        state.passes += 1
        before = int(state.kappa.sum())
        state.scale = state.remaining / total
        step = state.scale * state.x
        state.ideal += step
        kappa = _round_half_away(state.kappa + step)
        full = kappa >= beta
        kappa[full] = beta[full]
        state.x[full] = 0.0
        state.kappa = kappa
        state.remaining = m - int(kappa.sum())
        if state.remaining > 0 and int(kappa.sum()) == before:
            break

    if state.remaining > 0:
        _fill_round_robin(state)
    elif state.remaining < 0:
        _repair_overshoot(state)
    logger.debug("allocated kappa=%s from beta=%s in %d passes", state.kappa, beta, state.passes)
    return state


def _fill_round_robin(state: AllocationState) -> None:
    state.passes += 1
    state.used_fallback = True
    logger.debug("allocation stalled with %d points left; filling round-robin", state.remaining)
    order = [int(j) for j in np.argsort(-state.x, kind="stable") if state.kappa[j] < state.beta[j]]
    while state.remaining > 0:
        open_bins = []
        for j in order:
            if state.remaining == 0:
                break
            state.kappa[j] += 1
            state.remaining -= 1
            if state.kappa[j] < state.beta[j]:
                open_bins.append(j)
            else:
                state.x[j] = 0.0
        order = open_bins


def _repair_overshoot(state: AllocationState) -> None:
    state.repaired_overshoot = True
    logger.debug("allocation overshot by %d points; trimming", -state.remaining)
    while state.remaining < 0:
        excess = state.kappa - state.ideal
        candidates = np.flatnonzero(state.kappa > 0)
        # largest excess, then larger kappa, then smaller index
        best = min(candidates, key=lambda j: (-excess[j], -state.kappa[j], j))
        state.kappa[best] -= 1
        state.remaining += 1


def allocate(m: int, omega, beta) -> np.ndarray:
    """Per-bin sample counts: sum is exactly m and 0 <= kappa_j <= beta_j."""
    return run_allocation(m, omega, beta).kappa
