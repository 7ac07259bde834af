"""End-to-end sampling: neighbors, attention, scores, bins, allocation and in-bin draws."""

import logging
from typing import Iterable, List, Optional, Tuple

import numpy as np

from ..attention.maps import carve_sam, global_map, insert_sam, local_rows, token_energies
from ..attention.types import DenseAttentionMap, SamVariant, TokenEnergyMatrix, WeightSet
from ..geometry.baselines import sample_fps, sample_random, sample_voxel
from ..geometry.neighbors import knn
from ..geometry.types import NeighborTable, PointCloud
from ..internal.config import SamplerConfig
from ..internal.errors import ConfigError, InvalidMError
from ..scoring.modes import normalize, score
from ..scoring.types import ScoreVector
from .allocation import allocate
from .boundaries import BoundaryTracker, batch_boundaries, partition
from .policies import bin_weights, in_bin_sample, sample_prior, sample_top_m, top_indices
from .types import BinModel, BoundaryMode, InBinPolicy, OmegaMode, SampleResult, SamplingPolicy

logger = logging.getLogger(__name__)


class ScoredCloud:
    """Normalized scores of one cloud plus the intermediates the bin stage reuses."""

    def __init__(
        self,
        scores: ScoreVector,
        table: Optional[NeighborTable],
        energies: Optional[TokenEnergyMatrix],
    ):
        self.scores = scores
        self.table = table
        self.energies = energies


def _dense_map(cloud: PointCloud, ws: WeightSet) -> Tuple[DenseAttentionMap, Optional[TokenEnergyMatrix]]:
    if ws.n_b > 0:
        energies = token_energies(cloud, ws)
        return energies.point_map(), energies
    return global_map(cloud, ws), None


def score_cloud(cloud: PointCloud, ws: WeightSet, config: SamplerConfig) -> ScoredCloud:
    """Build the attention map the config asks for and reduce it to normalized scores."""
    table: Optional[NeighborTable] = None
    energies: Optional[TokenEnergyMatrix] = None
    if config.mode.needs_dense:
        dense, energies = _dense_map(cloud, ws)
        raw = score(dense, config.mode)
    else:
        table = knn(cloud, config.k, config.neighbor_search)
        if config.variant == SamVariant.CARVE:
            dense, energies = _dense_map(cloud, ws)
            sam = carve_sam(dense, table)
        else:
            sam = insert_sam(local_rows(cloud, table, ws), table)
        raw = score(sam, config.mode)
    logger.debug(
        "scored %s: N=%d mode=%s variant=%s",
        cloud.id or "cloud",
        cloud.n,
        config.mode.value,
        config.variant.value,
    )
    return ScoredCloud(normalize(raw), table, energies)


def _resolve_boundaries(
    scores: ScoreVector, config: SamplerConfig, state: Optional[BoundaryTracker]
) -> np.ndarray:
    if state is not None and state.n_b != config.n_b:
        raise ConfigError("boundary state has n_b=%d, config has n_b=%d" % (state.n_b, config.n_b))
    if config.boundary_mode == BoundaryMode.FROZEN:
        if state is None or not state.ready:
            raise ConfigError("frozen boundary mode needs a stored boundary state")
        return state.boundaries
    current = batch_boundaries([scores], config.n_b)
    if state is None:
        return current
    return state.update(current)


def _omega(
    cloud: PointCloud,
    ws: WeightSet,
    config: SamplerConfig,
    scored: ScoredCloud,
    bins: np.ndarray,
    beta: np.ndarray,
) -> np.ndarray:
    if config.omega_mode == OmegaMode.UNIFORM:
        return (beta > 0).astype(np.float64)
    if ws.n_b != config.n_b:
        raise ConfigError("weights carry %d bin tokens, config asks for n_b=%d" % (ws.n_b, config.n_b))
    energies = scored.energies if scored.energies is not None else token_energies(cloud, ws)
    return bin_weights(energies, bins, beta, config.relu_order)


def samble_sample(
    cloud: PointCloud,
    ws: WeightSet,
    config: SamplerConfig,
    m: int,
    state: Optional[BoundaryTracker] = None,
    seed: Optional[int] = None,
    scored: Optional[ScoredCloud] = None,
) -> Tuple[SampleResult, BinModel, np.ndarray]:
    """Bin-based sampling of m points from one cloud.

    Returns the sample, the bin model behind it and the boundaries used. In adaptive
    mode a supplied state is advanced with this cloud's boundaries; frozen mode reads it.
    """
    n = cloud.n
    if m < 1 or m > n:
        raise InvalidMError(m, n)
    seed = config.seed if seed is None else seed
    if scored is None:
        scored = score_cloud(cloud, ws, config)
    normalized = scored.scores.values()

    boundaries = _resolve_boundaries(scored.scores, config, state)
    bins, beta = partition(normalized, boundaries)
    omega = _omega(cloud, ws, config, scored, bins, beta)
    kappa = allocate(m, omega, beta)

    rng = np.random.default_rng(seed)
    picked: List[np.ndarray] = []
    for j in range(config.n_b):
        if kappa[j] == 0:
            continue
        members = np.flatnonzero(bins == j)
        if config.in_bin_policy == InBinPolicy.TOP_M:
            picked.append(top_indices(members, normalized[members], int(kappa[j])))
        else:
            picked.append(in_bin_sample(members, normalized[members], int(kappa[j]), config.tau, rng))
    indices = np.concatenate(picked)

    model = BinModel(boundaries, beta, omega, kappa, config.gamma)
    logger.debug("bin sample of %s: beta=%s omega=%s kappa=%s", cloud.id or "cloud", beta, omega, kappa)
    result = SampleResult(
        indices, n, SamplingPolicy.BIN, seed=seed, scores=normalized[indices], bins=bins[indices]
    )
    return result, model, boundaries


def run_policy(
    cloud: PointCloud,
    ws: WeightSet,
    config: SamplerConfig,
    m: int,
    state: Optional[BoundaryTracker] = None,
    seed: Optional[int] = None,
) -> Tuple[SampleResult, Optional[BinModel]]:
    """Dispatch on config.policy; only the bin policy produces a BinModel."""
    seed = config.seed if seed is None else seed
    policy = config.policy
    if policy == SamplingPolicy.BIN:
        result, model, _ = samble_sample(cloud, ws, config, m, state=state, seed=seed)
        return result, model
    if policy == SamplingPolicy.RANDOM:
        return sample_random(cloud, m, seed), None
    if policy == SamplingPolicy.FPS:
        return sample_fps(cloud, m, start=config.fps_start, seed=seed), None
    if policy == SamplingPolicy.VOXEL:
        return sample_voxel(cloud, config.voxel_cell, m, seed), None

    scores = score_cloud(cloud, ws, config).scores
    if policy == SamplingPolicy.TOP_M:
        return sample_top_m(scores, m), None
    return sample_prior(scores, m, config.tau, seed), None


def calibrate(
    clouds: Iterable[PointCloud],
    ws: WeightSet,
    config: SamplerConfig,
    tracker: Optional[BoundaryTracker] = None,
) -> BoundaryTracker:
    """Fold boundaries over a corpus, config.batch_size clouds per momentum step."""
    if tracker is None:
        tracker = BoundaryTracker(config.n_b, config.gamma)
    elif tracker.n_b != config.n_b:
        raise ConfigError("boundary state has n_b=%d, config has n_b=%d" % (tracker.n_b, config.n_b))
    batch: List[ScoreVector] = []
    for cloud in clouds:
        batch.append(score_cloud(cloud, ws, config).scores)
        if len(batch) == config.batch_size:
            tracker.observe(batch)
            batch = []
    if batch:
        tracker.observe(batch)
    logger.info("calibrated %d boundaries over %d steps", config.n_b - 1, tracker.steps)
    return tracker
