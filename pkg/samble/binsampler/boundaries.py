import logging
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..internal.errors import FormatError, LengthMismatchError, SambleError, TooFewPointsError
from ..scoring.types import ScoreVector

logger = logging.getLogger(__name__)

STATE_MAGIC = "# samble-boundaries"


def _pooled(scores: Iterable[Union[ScoreVector, np.ndarray]]) -> np.ndarray:
    parts: List[np.ndarray] = []
    for sv in scores:
        values = sv.values() if isinstance(sv, ScoreVector) else np.asarray(sv, dtype=np.float64)
        parts.append(values.ravel())
    if not parts:
        return np.zeros(0, dtype=np.float64)
    return np.concatenate(parts)


def batch_boundaries(scores: Iterable[Union[ScoreVector, np.ndarray]], n_b: int) -> np.ndarray:
    """n_b - 1 cut points that split the pooled batch scores into near-equal bins.

    Each cut is the midpoint of the two order statistics straddling the j/n_b level,
    so bucket sizes are floor(P/n_b) or ceil(P/n_b). Returned in descending order.
    """
    if n_b < 1:
        raise SambleError("n_b must be >= 1, got %d" % n_b)
    pooled = np.sort(_pooled(scores))
    p = pooled.shape[0]
    if p < n_b:
        raise TooFewPointsError(n_b, p)
    cuts = np.empty(n_b - 1, dtype=np.float64)
    for j in range(1, n_b):
        c = (j * p) // n_b
        cuts[j - 1] = 0.5 * (pooled[c - 1] + pooled[c])
    return cuts[::-1].copy()


def momentum_update(previous: Optional[np.ndarray], current: np.ndarray, gamma: float) -> np.ndarray:
    """Exponential moving average of boundary vectors; the first batch is taken as is."""
    if not 0.0 < gamma < 1.0:
        raise SambleError("gamma must lie in (0, 1), got %r" % gamma)
    current = np.asarray(current, dtype=np.float64)
    if previous is None:
        return current.copy()
    previous = np.asarray(previous, dtype=np.float64)
    if previous.shape != current.shape:
        raise LengthMismatchError(
            "boundary vectors differ in length: %d vs %d" % (previous.shape[0], current.shape[0])
        )
    return gamma * previous + (1.0 - gamma) * current


def partition(
    scores: Union[ScoreVector, np.ndarray], boundaries: Sequence[float]
) -> Tuple[np.ndarray, np.ndarray]:
    """Bin id per point and the per-bin counts.

    A point's bin is the number of boundaries strictly above its score, so bin 0
    holds the highest scores and a score equal to a boundary stays in the higher bin.
    """
    values = scores.values() if isinstance(scores, ScoreVector) else np.asarray(scores, dtype=np.float64)
    nu = np.asarray(boundaries, dtype=np.float64)
    n_b = nu.shape[0] + 1
    # searchsorted on the ascending view: count of boundaries <= a, then flip
    ascending = nu[::-1]
    bins = (n_b - 1) - np.searchsorted(ascending, values, side="right")
    bins = bins.astype(np.int64)
    beta = np.bincount(bins, minlength=n_b).astype(np.int64)
    return bins, beta


class BoundaryTracker:
    """Boundary state folded over calibration batches, persisted as a text state file."""

    def __init__(
        self, n_b: int, gamma: float = 0.99, boundaries: Optional[np.ndarray] = None, steps: int = 0
    ):
        if n_b < 1:
            raise SambleError("n_b must be >= 1, got %d" % n_b)
        self.n_b = n_b
        self.gamma = gamma
        self.steps = steps
        self.boundaries = None if boundaries is None else np.asarray(boundaries, dtype=np.float64)
        if self.boundaries is not None and self.boundaries.shape[0] != n_b - 1:
            raise LengthMismatchError("expected %d boundaries, got %d" % (n_b - 1, self.boundaries.shape[0]))

    @property
    def ready(self) -> bool:
        return self.boundaries is not None

    def update(self, current: np.ndarray) -> np.ndarray:
        self.boundaries = momentum_update(self.boundaries, current, self.gamma)
        self.steps += 1
        logger.debug("boundaries after step %d: %s", self.steps, self.boundaries)
        return self.boundaries

    def observe(self, scores: Iterable[Union[ScoreVector, np.ndarray]]) -> np.ndarray:
        """Fold one batch of per-shape scores into the boundary estimate."""
        return self.update(batch_boundaries(scores, self.n_b))

    def save(self, path: str) -> None:
        if self.boundaries is None:
            raise SambleError("no boundaries to save; observe at least one batch first")
        with open(path, "w") as fh:
            fh.write(format_state(self))

    @classmethod
    def load(cls, path: str) -> "BoundaryTracker":
        with open(path) as fh:
            return parse_state(fh.read(), path)


def format_state(tracker: BoundaryTracker) -> str:
    lines = ["%s n_b=%d gamma=%r steps=%d" % (STATE_MAGIC, tracker.n_b, tracker.gamma, tracker.steps)]
    lines.extend("%r" % float(v) for v in tracker.boundaries)
    return "\n".join(lines) + "\n"


def parse_state(text: str, source: str = "<state>") -> BoundaryTracker:
    lines = text.splitlines()
    if not lines or not lines[0].startswith(STATE_MAGIC):
        raise FormatError("%s: missing '%s' header" % (source, STATE_MAGIC))
    fields = {}
    for token in lines[0][len(STATE_MAGIC) :].split():
        key, sep, value = token.partition("=")
        if not sep:
            raise FormatError("%s: malformed header field %r" % (source, token))
        fields[key] = value
    try:
        n_b = int(fields["n_b"])
        gamma = float(fields["gamma"])
        steps = int(fields.get("steps", "0"))
    except (KeyError, ValueError) as e:
        raise FormatError("%s: bad state header: %s" % (source, e))

    values = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise FormatError("%s:%d: not a boundary value: %r" % (source, lineno, line))
    if len(values) != n_b - 1:
        raise FormatError("%s: header declares n_b=%d but holds %d boundaries" % (source, n_b, len(values)))
    return BoundaryTracker(n_b, gamma, np.array(values, dtype=np.float64), steps)
