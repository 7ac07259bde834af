"""Command-line entry point: `samble <command> [options]`."""

import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence, TextIO

from dotenv import load_dotenv

from .attention.weights import init_weights, load_weights, save_weights
from .binsampler.boundaries import BoundaryTracker
from .binsampler.pipeline import calibrate, run_policy, samble_sample, score_cloud
from .binsampler.types import SamplingPolicy
from .geometry.io import load_pointcloud, write_pointcloud
from .geometry.neighbors import knn, neighbor_frequency
from .geometry.types import CloudFormat, PointCloud
from .internal.config import SamplerConfig
from .internal.errors import SambleError
from .internal.records import format_bins, format_knn_frequency, format_sample, format_scores

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
CLOUD_SUFFIXES = (".xyz", ".ply")

# CLI flag dest -> config key; only flags the user actually passed override the config
_CONFIG_FLAGS = (
    "mode",
    "k",
    "n_b",
    "gamma",
    "tau",
    "variant",
    "policy",
    "seed",
    "in_bin_policy",
    "omega_mode",
    "fps_start",
)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (default from config)")
    parser.add_argument("--mode", default=None, help="indexing mode i..vii")
    parser.add_argument("-k", type=int, default=None, help="neighbors per point")
    parser.add_argument("--n-b", dest="n_b", type=int, default=None, help="number of bins")
    parser.add_argument("--gamma", type=float, default=None, help="boundary momentum factor")
    parser.add_argument("--tau", type=float, default=None, help="sampling temperature")
    parser.add_argument("--variant", default=None, help="carve or insert")
    parser.add_argument("--policy", default=None, help="top-m, prior, bin, random, fps or voxel")
    parser.add_argument("--in-bin-policy", dest="in_bin_policy", default=None, help="prior or top-m")
    parser.add_argument("--omega-mode", dest="omega_mode", default=None, help="tokens or uniform")
    parser.add_argument("--fps-start", dest="fps_start", default=None, help="first or seeded FPS start point")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="samble", description="Attention-based point cloud sampling")
    parser.add_argument("--config", help="key = value config file")
    parser.add_argument("--weights", help="binary weight file (default: seeded weights)")
    parser.add_argument("--state", help="boundary state file")
    parser.add_argument(
        "--format", choices=[f.value for f in CloudFormat], default=None, help="point cloud format"
    )
    parser.add_argument("--log-level", default=None, help="logging level (env SAMBLE_LOG_LEVEL)")
    parser.add_argument("-o", "--output", help="output file (default: stdout)")
    _add_config_flags(parser)
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("sample", help="sample M points from a cloud")
    p.add_argument("cloud")
    p.add_argument("-m", type=int, required=True)

    p = sub.add_parser("scores", help="write the per-point score table")
    p.add_argument("cloud")

    p = sub.add_parser("bins", help="write bin histograms (bin beta kappa ratio omega)")
    p.add_argument("clouds", nargs="+")
    p.add_argument("-m", type=int, required=True)

    p = sub.add_parser("knn-freq", help="write how often each point is chosen as a neighbor")
    p.add_argument("cloud")

    p = sub.add_parser("bench", help="compare samplers on synthetic shapes")
    p.add_argument("--shapes", default="grid2d,circle,cube-shell,L-bracket")
    p.add_argument("--samplers", default=None, help="comma separated sampler names")
    p.add_argument("-m", default="16", help="comma separated sample sizes")
    p.add_argument("--workers", type=int, default=4)
    p.add_argument("--timing", action="store_true", help="add a wall-clock column")

    p = sub.add_parser("calibrate", help="fold boundaries over a directory of clouds into --state")
    p.add_argument("directory")

    p = sub.add_parser("gen", help="write a synthetic shape")
    p.add_argument("generator")
    p.add_argument("--params", default="", help="key=value,... generator parameters")
    p.add_argument("--mask", help="also write the edge mask (index edge) to this file")

    p = sub.add_parser("weights", help="write seeded weights to --output")
    p.add_argument("--d-in", dest="d_in", type=int, default=3)
    return parser


def load_config(args: argparse.Namespace) -> SamplerConfig:
    """Defaults, then --config file, then SAMBLE_* environment, then flags."""
    config = SamplerConfig()
    if args.config:
        config = SamplerConfig.from_file(args.config, config)
    config = SamplerConfig.from_env(config, dotenv=False)
    overrides: Dict[str, Any] = {}
    for key in _CONFIG_FLAGS:
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    return config.replace(**overrides) if overrides else config


def _load_cloud(path: str, args: argparse.Namespace) -> PointCloud:
    return load_pointcloud(path, args.format)


def _weights(args: argparse.Namespace, config: SamplerConfig, d_in: int = 3):
    if args.weights:
        return load_weights(args.weights)
    return init_weights(d_in, config.key_dim, config.n_b, config.weight_seed)


def _state(args: argparse.Namespace) -> Optional[BoundaryTracker]:
    return BoundaryTracker.load(args.state) if args.state else None


def _ints(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise SambleError("expected comma separated integers, got %r" % text)


def _cmd_sample(args, config, out: TextIO) -> None:
    cloud = _load_cloud(args.cloud, args)
    result, _ = run_policy(cloud, _weights(args, config), config, args.m, state=_state(args))
    out.write(format_sample(result, cloud.id))


def _cmd_scores(args, config, out: TextIO) -> None:
    cloud = _load_cloud(args.cloud, args)
    scored = score_cloud(cloud, _weights(args, config), config)
    if config.mode.needs_dense:
        out.write(format_scores(scored.scores, cloud.id))
    else:
        out.write(format_scores(scored.scores, cloud.id, config.k, config.variant))


def _cmd_bins(args, config, out: TextIO) -> None:
    ws = _weights(args, config)
    state = _state(args)
    for path in args.clouds:
        cloud = _load_cloud(path, args)
        _, model, _ = samble_sample(cloud, ws, config, args.m, state=state)
        out.write(format_bins(model, cloud.id))


def _cmd_knn_freq(args, config, out: TextIO) -> None:
    cloud = _load_cloud(args.cloud, args)
    table = knn(cloud, config.k, config.neighbor_search)
    out.write(format_knn_frequency(neighbor_frequency(table), table.k, cloud.id))


def _cmd_bench(args, config, out: TextIO) -> None:
    from .harness.bench import DEFAULT_SAMPLERS, format_report, run_bench
    from .harness.shapes import gen_shape

    shapes = [gen_shape(name.strip(), None, config.seed) for name in args.shapes.split(",") if name.strip()]
    samplers = [s.strip() for s in args.samplers.split(",")] if args.samplers else list(DEFAULT_SAMPLERS)
    report = run_bench(
        shapes,
        samplers,
        _ints(args.m),
        config.seed,
        config,
        _weights(args, config),
        args.workers,
        args.timing,
    )
    out.write(format_report(report))


def _cmd_calibrate(args, config, out: TextIO) -> None:
    if not args.state:
        raise SambleError("calibrate needs --state to write the boundaries to")
    paths = sorted(
        os.path.join(args.directory, name)
        for name in os.listdir(args.directory)
        if name.lower().endswith(CLOUD_SUFFIXES)
    )
    if not paths:
        raise SambleError("no .xyz or .ply clouds in %s" % args.directory)
    previous = BoundaryTracker.load(args.state) if os.path.exists(args.state) else None
    tracker = calibrate(
        (_load_cloud(p, args) for p in paths), _weights(args, config), config, previous
    )
    tracker.save(args.state)
    out.write("# calibrated n_b=%d steps=%d clouds=%d\n" % (tracker.n_b, tracker.steps, len(paths)))


def _cmd_gen(args, config, out: TextIO) -> None:
    from .harness.shapes import gen_shape, parse_shape_params

    shape = gen_shape(args.generator, parse_shape_params(args.params), config.seed)
    write_pointcloud(shape.cloud, out, args.format or CloudFormat.XYZ)
    if args.mask:
        with open(args.mask, "w") as fh:
            fh.write("# samble-edge-mask id=%s n=%d edges=%d\n" % (shape.id, shape.cloud.n, shape.edge_count))
            fh.write("# index edge\n")
            for i, edge in enumerate(shape.edge_mask):
                fh.write("%d %d\n" % (i, int(edge)))


def _cmd_weights(args, config, out: TextIO) -> None:
    if not args.output:
        raise SambleError("weights needs --output")
    save_weights(init_weights(args.d_in, config.key_dim, config.n_b, config.weight_seed), args.output)


_COMMANDS = {
    "sample": _cmd_sample,
    "scores": _cmd_scores,
    "bins": _cmd_bins,
    "knn-freq": _cmd_knn_freq,
    "bench": _cmd_bench,
    "calibrate": _cmd_calibrate,
    "gen": _cmd_gen,
    "weights": _cmd_weights,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    level = (args.log_level or os.getenv("SAMBLE_LOG_LEVEL") or "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format=LOG_FORMAT)

    try:
        config = load_config(args)
        if args.command == "bins" and config.policy != SamplingPolicy.BIN:
            logger.info("bins always uses the bin policy; ignoring policy=%s", config.policy.value)
        if args.output and args.command != "weights":
            with open(args.output, "w") as out:
                _COMMANDS[args.command](args, config, out)
        else:
            _COMMANDS[args.command](args, config, sys.stdout)
    except SambleError as e:
        logger.error("%s failed: %s", args.command, e)
        print("error: %s" % e, file=sys.stderr)
        return 2
    except OSError as e:
        logger.error("%s failed: %s", args.command, e)
        print("error: %s" % e, file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
