"""Sampler configuration: defaults, flat key-value files and SAMBLE_* environment overrides."""

import os
from typing import Any, Callable, Dict, Optional

from dotenv import load_dotenv

from ..attention.types import SamVariant
from ..binsampler.types import BoundaryMode, InBinPolicy, OmegaMode, ReluOrder, SamplingPolicy
from ..geometry.types import FpsStart, NeighborSearch
from ..scoring.types import IndexingMode
from .errors import ConfigError

ENV_PREFIX = "SAMBLE_"


def _enum(enum_cls) -> Callable[[Any], Any]:
    def convert(value: Any) -> Any:
        if isinstance(value, enum_cls):
            return value
        try:
            return enum_cls(str(value).strip().lower())
        except ValueError:
            choices = ", ".join(m.value for m in enum_cls)
            raise ConfigError("invalid value %r, expected one of: %s" % (value, choices))

    return convert


def _int(value: Any) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigError("expected an integer, got %r" % (value,))


def _float(value: Any) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError("expected a number, got %r" % (value,))


_CONVERTERS: Dict[str, Callable[[Any], Any]] = {
    "mode": _enum(IndexingMode),
    "k": _int,
    "n_b": _int,
    "gamma": _float,
    "tau": _float,
    "variant": _enum(SamVariant),
    "policy": _enum(SamplingPolicy),
    "seed": _int,
    "in_bin_policy": _enum(InBinPolicy),
    "relu_order": _enum(ReluOrder),
    "omega_mode": _enum(OmegaMode),
    "boundary_mode": _enum(BoundaryMode),
    "neighbor_search": _enum(NeighborSearch),
    "key_dim": _int,
    "weight_seed": _int,
    "voxel_cell": _float,
    "batch_size": _int,
    "fps_start": _enum(FpsStart),
}


class SamplerConfig:
    def __init__(
        self,
        mode: IndexingMode = IndexingMode.SPARSE_COLUMN_SQUARE_DIVIDED,
        k: int = 32,
        n_b: int = 6,
        gamma: float = 0.99,
        tau: float = 0.1,
        variant: SamVariant = SamVariant.CARVE,
        policy: SamplingPolicy = SamplingPolicy.BIN,
        seed: int = 0,
        in_bin_policy: InBinPolicy = InBinPolicy.PRIOR,
        relu_order: ReluOrder = ReluOrder.AFTER_MEAN,
        omega_mode: OmegaMode = OmegaMode.TOKENS,
        boundary_mode: BoundaryMode = BoundaryMode.ADAPTIVE,
        neighbor_search: NeighborSearch = NeighborSearch.EXHAUSTIVE,
        key_dim: int = 16,
        weight_seed: int = 0,
        voxel_cell: float = 0.05,
        batch_size: int = 32,
        fps_start: FpsStart = FpsStart.FIRST,
    ):
        self.mode = _CONVERTERS["mode"](mode)
        self.k = _int(k)
        self.n_b = _int(n_b)
        self.gamma = _float(gamma)
        self.tau = _float(tau)
        self.variant = _CONVERTERS["variant"](variant)
        self.policy = _CONVERTERS["policy"](policy)
        self.seed = _int(seed)
        self.in_bin_policy = _CONVERTERS["in_bin_policy"](in_bin_policy)
        self.relu_order = _CONVERTERS["relu_order"](relu_order)
        self.omega_mode = _CONVERTERS["omega_mode"](omega_mode)
        self.boundary_mode = _CONVERTERS["boundary_mode"](boundary_mode)
        self.neighbor_search = _CONVERTERS["neighbor_search"](neighbor_search)
        self.key_dim = _int(key_dim)
        self.weight_seed = _int(weight_seed)
        self.voxel_cell = _float(voxel_cell)
        self.batch_size = _int(batch_size)
        self.fps_start = _CONVERTERS["fps_start"](fps_start)
        self.validate()

    def validate(self) -> None:
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.n_b < 1:
            raise ConfigError("n_b must be >= 1")
        if not 0.0 < self.gamma < 1.0:
            raise ConfigError("gamma must lie in (0, 1)")
        if self.tau <= 0.0:
            raise ConfigError("tau must be > 0")
        if self.key_dim < 1:
            raise ConfigError("key_dim must be >= 1")
        if self.voxel_cell <= 0.0:
            raise ConfigError("voxel_cell must be > 0")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")

    @classmethod
    def classification(cls, **overrides: Any) -> "SamplerConfig":
        params: Dict[str, Any] = {"n_b": 6, "gamma": 0.99, "tau": 0.1}
        params.update(overrides)
        return cls(**params)

    @classmethod
    def segmentation(cls, **overrides: Any) -> "SamplerConfig":
        params: Dict[str, Any] = {"n_b": 4, "gamma": 0.99, "tau": 0.1}
        params.update(overrides)
        return cls(**params)

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {}
        for key in _CONVERTERS:
            value = getattr(self, key)
            out[key] = value.value if hasattr(value, "value") else value
        return out

    def replace(self, **overrides: Any) -> "SamplerConfig":
        params = self.to_dict()
        for key, value in overrides.items():
            if key not in _CONVERTERS:
                raise ConfigError("unknown config key: %s" % key)
            params[key] = value
        return SamplerConfig(**params)

    @classmethod
    def from_file(cls, path: str, base: Optional["SamplerConfig"] = None) -> "SamplerConfig":
        overrides = parse_config_text(_read_text(path), path)
        return (base or cls()).replace(**overrides)

    @classmethod
    def from_env(cls, base: Optional["SamplerConfig"] = None, dotenv: bool = True) -> "SamplerConfig":
        if dotenv:
            load_dotenv()
        overrides = {}
        for key in _CONVERTERS:
            value = os.getenv(ENV_PREFIX + key.upper())
            if value is not None and value != "":
                overrides[key] = value
        return (base or cls()).replace(**overrides)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SamplerConfig) and self.to_dict() == other.to_dict()

    def __repr__(self) -> str:
        body = ", ".join("%s=%r" % kv for kv in self.to_dict().items())
        return "SamplerConfig(%s)" % body


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def parse_config_text(text: str, source: str = "<config>") -> Dict[str, str]:
    """Parse `key = value` lines; `#` starts a comment, blank lines are skipped."""
    overrides: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, value = line.split("=", 1)
        else:
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise ConfigError("%s:%d: expected `key = value`" % (source, lineno))
            key, value = parts
        key = key.strip().lower().replace("-", "_")
        if key not in _CONVERTERS:
            raise ConfigError("%s:%d: unknown config key: %s" % (source, lineno, key))
        overrides[key] = value.strip()
    return overrides
