import asyncio
import logging
from typing import Any, Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .attention.types import WeightSet
from .attention.weights import init_weights, load_weights
from .binsampler.boundaries import BoundaryTracker
from .binsampler.pipeline import ScoredCloud, calibrate, run_policy, samble_sample, score_cloud
from .binsampler.types import BinModel, SampleResult
from .geometry.io import load_pointcloud
from .geometry.neighbors import knn, neighbor_frequency
from .geometry.types import PointCloud
from .harness.types import BenchReport, SyntheticShape
from .internal.config import SamplerConfig

logger = logging.getLogger(__name__)

CloudLike = Union[PointCloud, str]


class Client:
    """Sampler facade: one config, one weight set, an optional boundary state."""

    def __init__(
        self,
        config: Optional[SamplerConfig] = None,
        weights: Optional[Union[WeightSet, str]] = None,
        state: Optional[Union[BoundaryTracker, str]] = None,
        d_in: int = 3,
    ):
        self.config = config or SamplerConfig()
        self.d_in = d_in
        self._weights = load_weights(weights) if isinstance(weights, str) else weights
        self.state = BoundaryTracker.load(state) if isinstance(state, str) else state

    @property
    def weights(self) -> WeightSet:
        """Loaded weights, or seeded ones built from the config on first use."""
        if self._weights is None:
            cfg = self.config
            self._weights = init_weights(self.d_in, cfg.key_dim, cfg.n_b, cfg.weight_seed)
            logger.debug("using seeded weights %s", self._weights.source)
        return self._weights

    def _cloud(self, cloud: CloudLike) -> PointCloud:
        return load_pointcloud(cloud) if isinstance(cloud, str) else cloud

    def neighbor_frequency(self, cloud: CloudLike, k: Optional[int] = None) -> np.ndarray:
        cloud = self._cloud(cloud)
        return neighbor_frequency(knn(cloud, k or self.config.k, self.config.neighbor_search))

    def scores(self, cloud: CloudLike) -> ScoredCloud:
        return score_cloud(self._cloud(cloud), self.weights, self.config)

    def sample(
        self, cloud: CloudLike, m: int, seed: Optional[int] = None
    ) -> Tuple[SampleResult, Optional[BinModel]]:
        return run_policy(self._cloud(cloud), self.weights, self.config, m, state=self.state, seed=seed)

    def sample_bins(
        self, cloud: CloudLike, m: int, seed: Optional[int] = None
    ) -> Tuple[SampleResult, BinModel, np.ndarray]:
        return samble_sample(self._cloud(cloud), self.weights, self.config, m, state=self.state, seed=seed)

    def calibrate(self, clouds: Iterable[CloudLike]) -> BoundaryTracker:
        self.state = calibrate((self._cloud(c) for c in clouds), self.weights, self.config, self.state)
        return self.state

    def gen_shape(
        self, generator: str, params: Optional[Dict[str, Any]] = None, seed: Optional[int] = None
    ) -> SyntheticShape:
        from .harness.shapes import gen_shape

        return gen_shape(generator, params, self.config.seed if seed is None else seed)

    def bench(
        self,
        shapes: Sequence[SyntheticShape],
        samplers: Optional[Sequence[str]] = None,
        m_values: Sequence[int] = (32,),
        workers: int = 4,
        include_timing: bool = False,
    ) -> BenchReport:
        return asyncio.run(self.bench_async(shapes, samplers, m_values, workers, include_timing))

    async def bench_async(
        self,
        shapes: Sequence[SyntheticShape],
        samplers: Optional[Sequence[str]] = None,
        m_values: Sequence[int] = (32,),
        workers: int = 4,
        include_timing: bool = False,
    ) -> BenchReport:
        from .harness.bench import DEFAULT_SAMPLERS, run_bench_async

        return await run_bench_async(
            shapes,
            samplers or DEFAULT_SAMPLERS,
            m_values,
            self.config.seed,
            self.config,
            self.weights,
            workers,
            include_timing,
        )
