from .attention.types import DenseAttentionMap, SamVariant, SparseAttentionMap, TokenEnergyMatrix, WeightSet
from .attention.weights import init_weights, load_weights, save_weights
from .binsampler.allocation import allocate
from .binsampler.boundaries import BoundaryTracker, batch_boundaries, momentum_update, partition
from .binsampler.pipeline import calibrate, run_policy, samble_sample, score_cloud
from .binsampler.policies import (
    bin_weights,
    in_bin_sample,
    sample_prior,
    sample_top_m,
    selection_probabilities,
)
from .binsampler.types import BinModel, InBinPolicy, SampleResult, SamplingPolicy
from .client import Client
from .geometry.baselines import sample_fps, sample_random, sample_voxel
from .geometry.io import load_pointcloud, write_pointcloud
from .geometry.neighbors import knn, neighbor_frequency
from .geometry.types import NeighborTable, PointCloud
from .internal.config import SamplerConfig
from .internal.errors import SambleError
from .scoring.modes import normalize, score
from .scoring.types import IndexingMode, ScoreVector


def __getattr__(name):
    # harness pulls in scipy.spatial and the thread pool; load on demand
    if name == "gen_shape":
        from .harness.shapes import gen_shape

        return gen_shape
    if name == "run_bench":
        from .harness.bench import run_bench

        return run_bench
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [
    "Client",
    "SamplerConfig",
    "SambleError",
    "PointCloud",
    "NeighborTable",
    "load_pointcloud",
    "write_pointcloud",
    "knn",
    "neighbor_frequency",
    "sample_random",
    "sample_fps",
    "sample_voxel",
    "WeightSet",
    "SamVariant",
    "DenseAttentionMap",
    "SparseAttentionMap",
    "TokenEnergyMatrix",
    "init_weights",
    "load_weights",
    "save_weights",
    "IndexingMode",
    "ScoreVector",
    "score",
    "normalize",
    "BinModel",
    "SampleResult",
    "SamplingPolicy",
    "InBinPolicy",
    "BoundaryTracker",
    "batch_boundaries",
    "momentum_update",
    "partition",
    "bin_weights",
    "allocate",
    "in_bin_sample",
    "selection_probabilities",
    "sample_top_m",
    "sample_prior",
    "samble_sample",
    "run_policy",
    "score_cloud",
    "calibrate",
    "gen_shape",
    "run_bench",
]
