"""Plain delimited text tables with a `#` metadata header, as written by the CLI."""

from typing import Optional

import numpy as np

from ..attention.types import SamVariant
from ..binsampler.types import BinModel, SampleResult
from ..scoring.types import ScoreVector


def _real(value: float) -> str:
    return "nan" if np.isnan(value) else "%.17g" % value


def format_sample(result: SampleResult, shape_id: str = "") -> str:
    lines = [
        "# samble-sample id=%s n=%d m=%d seed=%s policy=%s shortfall=%d"
        % (
            shape_id or "-",
            result.n,
            result.m,
            "-" if result.seed is None else result.seed,
            result.policy.value,
            int(result.shortfall),
        ),
        "# index score bin",
    ]
    for i, s, b in zip(result.indices, result.scores, result.bins):
        lines.append("%d %s %d" % (i, _real(s), b))
    return "\n".join(lines) + "\n"


def format_scores(
    scores: ScoreVector,
    shape_id: str = "",
    k: Optional[int] = None,
    variant: Optional[SamVariant] = None,
) -> str:
    """Score table; k and variant are "-" for dense modes."""
    lines = [
        "# samble-scores id=%s n=%d mode=%s k=%s variant=%s"
        % (shape_id or "-", len(scores), scores.mode.value, k or "-", variant.value if variant else "-"),
        "# index raw normalized",
    ]
    normalized = scores.normalized if scores.normalized is not None else np.full(len(scores), np.nan)
    for i, (raw, norm) in enumerate(zip(scores.raw, normalized)):
        lines.append("%d %s %s" % (i, _real(raw), _real(norm)))
    return "\n".join(lines) + "\n"


def format_bins(model: BinModel, shape_id: str = "") -> str:
    lines = [
        "# samble-bins id=%s n_b=%d gamma=%r boundaries=%s"
        % (shape_id or "-", model.n_b, model.gamma, ",".join(_real(v) for v in model.boundaries) or "-"),
        "# bin beta kappa ratio omega",
    ]
    ratios = model.ratios
    for j in range(model.n_b):
        lines.append(
            "%d %d %d %s %s"
            % (j, model.counts[j], model.allocations[j], _real(ratios[j]), _real(model.weights[j]))
        )
    return "\n".join(lines) + "\n"


def format_knn_frequency(frequency: np.ndarray, k: int, shape_id: str = "") -> str:
    lines = [
        "# samble-knn-freq id=%s n=%d k=%d classes=%d"
        % (shape_id or "-", frequency.shape[0], k, np.unique(frequency).shape[0]),
        "# index n_o",
    ]
    lines.extend("%d %d" % (i, f) for i, f in enumerate(frequency))
    return "\n".join(lines) + "\n"
