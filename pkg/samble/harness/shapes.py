import logging
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from ..geometry.types import PointCloud
from ..internal.errors import SambleError, UnknownGeneratorError
from .types import ShapeGenerator, SyntheticShape

logger = logging.getLogger(__name__)

DEFAULT_PARAMS: Dict[ShapeGenerator, Dict[str, Any]] = {
    ShapeGenerator.GRID2D: {"rows": 10, "cols": 10, "spacing": 1.0},
    ShapeGenerator.CIRCLE: {"n": 64, "radius": 1.0},
    ShapeGenerator.CUBE_SHELL: {"n": 2048, "tol": 0.1},
    ShapeGenerator.L_BRACKET: {"size": 10, "spacing": 1.0},
}


def _lattice_edges(cells: np.ndarray) -> np.ndarray:
    """Lattice points missing at least one of their four axis neighbors."""
    occupied = {(int(i), int(j)) for i, j in cells}
    steps = ((1, 0), (-1, 0), (0, 1), (0, -1))
    return np.array(
        [any((int(i) + di, int(j) + dj) not in occupied for di, dj in steps) for i, j in cells],
        dtype=bool,
    )


def _lattice_cloud(cells: np.ndarray, spacing: float, shape_id: str) -> PointCloud:
    pts = np.zeros((cells.shape[0], 3), dtype=np.float64)
    pts[:, 0] = cells[:, 1] * spacing
    pts[:, 1] = cells[:, 0] * spacing
    return PointCloud(pts, id=shape_id)


def _grid2d(params: Dict[str, Any], seed: Optional[int]) -> Tuple[PointCloud, np.ndarray]:
    rows, cols = int(params["rows"]), int(params["cols"])
    if rows < 1 or cols < 1:
        raise SambleError("grid2d needs rows, cols >= 1")
    ii, jj = np.meshgrid(np.arange(rows), np.arange(cols), indexing="ij")
    # point index = i * cols + j
    cells = np.stack([ii.ravel(), jj.ravel()], axis=1)
    return _lattice_cloud(cells, float(params["spacing"]), "grid2d"), _lattice_edges(cells)


def _l_bracket(params: Dict[str, Any], seed: Optional[int]) -> Tuple[PointCloud, np.ndarray]:
    size = int(params["size"])
    if size < 2:
        raise SambleError("L-bracket needs size >= 2")
    half = size // 2
    ii, jj = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    keep = ~((ii >= half) & (jj >= half))
    cells = np.stack([ii[keep], jj[keep]], axis=1)
    return _lattice_cloud(cells, float(params["spacing"]), "L-bracket"), _lattice_edges(cells)


def _circle(params: Dict[str, Any], seed: Optional[int]) -> Tuple[PointCloud, np.ndarray]:
    n = int(params["n"])
    if n < 1:
        raise SambleError("circle needs n >= 1")
    radius = float(params["radius"])
    theta = 2.0 * np.pi * np.arange(n) / n
    pts = np.stack([radius * np.cos(theta), radius * np.sin(theta), np.zeros(n)], axis=1)
    return PointCloud(pts, id="circle"), np.ones(n, dtype=bool)


def _cube_shell(params: Dict[str, Any], seed: Optional[int]) -> Tuple[PointCloud, np.ndarray]:
    n = int(params["n"])
    if n < 1:
        raise SambleError("cube-shell needs n >= 1")
    rng = np.random.default_rng(seed)
    # faces have equal area: pick a fixed axis and sign, the other two uniform
    axis = rng.integers(3, size=n)
    sign = rng.choice([-1.0, 1.0], size=n)
    pts = rng.uniform(-1.0, 1.0, size=(n, 3))
    pts[np.arange(n), axis] = sign

    gap = np.abs(pts) - 1.0
    edge_dist = np.full(n, np.inf)
    for b, c in ((0, 1), (0, 2), (1, 2)):
        edge_dist = np.minimum(edge_dist, np.hypot(gap[:, b], gap[:, c]))
    return PointCloud(pts, id="cube-shell"), edge_dist <= float(params["tol"])


_Generator = Callable[[Dict[str, Any], Optional[int]], Tuple[PointCloud, np.ndarray]]

_GENERATORS: Dict[ShapeGenerator, _Generator] = {
    ShapeGenerator.GRID2D: _grid2d,
    ShapeGenerator.CIRCLE: _circle,
    ShapeGenerator.CUBE_SHELL: _cube_shell,
    ShapeGenerator.L_BRACKET: _l_bracket,
}


def gen_shape(
    generator: str, params: Optional[Dict[str, Any]] = None, seed: Optional[int] = 0
) -> SyntheticShape:
    """Deterministic synthetic cloud plus its edge mask.

    Unspecified parameters take the generator defaults; unknown ones are rejected.
    """
    try:
        gen = ShapeGenerator(generator)
    except ValueError:
        raise UnknownGeneratorError(str(generator))
    merged = dict(DEFAULT_PARAMS[gen])
    for key, value in (params or {}).items():
        if key not in merged:
            raise SambleError("%s does not take parameter %r" % (gen.value, key))
        merged[key] = value
    cloud, mask = _GENERATORS[gen](merged, seed)
    logger.debug("generated %s: N=%d edges=%d", gen.value, cloud.n, int(mask.sum()))
    return SyntheticShape(gen, merged, cloud, mask)


def parse_shape_params(text: str) -> Dict[str, Any]:
    """`rows=10,cols=8` into a parameter dict; values are parsed as numbers."""
    params: Dict[str, Any] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise SambleError("shape parameter %r is not key=value" % item)
        try:
            params[key.strip()] = int(value) if value.strip().lstrip("-").isdigit() else float(value)
        except ValueError:
            raise SambleError("shape parameter %s has a non-numeric value %r" % (key.strip(), value))
    return params
