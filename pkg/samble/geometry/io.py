import logging
import math
import os
from typing import List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from ..internal.errors import EmptyCloudError, ParseError
from .types import CloudFormat, PointCloud

logger = logging.getLogger(__name__)

_PLY_COORD_TYPES = ("float", "float32", "double", "float64")


def infer_format(path: str) -> CloudFormat:
    ext = os.path.splitext(path)[1].lower()
    if ext == ".ply":
        return CloudFormat.PLY_ASCII
    return CloudFormat.XYZ


def load_pointcloud(path: str, format: Optional[Union[CloudFormat, str]] = None) -> PointCloud:
    fmt = CloudFormat(format) if format is not None else infer_format(path)
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if fmt == CloudFormat.PLY_ASCII:
        points = _parse_ply(lines, path)
    else:
        points = _parse_xyz(lines, path)
    if not points:
        raise EmptyCloudError(path)
    logger.debug("loaded %d points from %s (%s)", len(points), path, fmt.value)
    return PointCloud(points, id=os.path.splitext(os.path.basename(path))[0])


def _parse_row(fields: Sequence[str], path: str, lineno: int) -> Tuple[float, float, float]:
    try:
        x, y, z = (float(v) for v in fields)
    except ValueError:
        raise ParseError(path, lineno, "non-numeric coordinate in %r" % " ".join(fields))
    if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
        raise ParseError(path, lineno, "non-finite coordinate")
    return x, y, z


def _parse_xyz(lines: List[str], path: str) -> List[Tuple[float, float, float]]:
    points = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        if len(fields) != 3:
            raise ParseError(path, lineno, "expected 3 columns, got %d" % len(fields))
        points.append(_parse_row(fields, path, lineno))
    return points


def _parse_ply(lines: List[str], path: str) -> List[Tuple[float, float, float]]:
    if not lines or lines[0].strip() != "ply":
        raise ParseError(path, 1, "missing `ply` magic line")

    vertex_count: Optional[int] = None
    properties: List[str] = []
    in_vertex = False
    header_end = None
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if not parts or parts[0] in ("comment", "obj_info"):
            continue
        keyword = parts[0]
        if keyword == "format":
            if len(parts) < 2 or parts[1] != "ascii":
                raise ParseError(path, lineno, "only ascii PLY is supported")
        elif keyword == "element":
            if len(parts) != 3:
                raise ParseError(path, lineno, "malformed element line")
            in_vertex = parts[1] == "vertex"
            if in_vertex:
                try:
                    vertex_count = int(parts[2])
                except ValueError:
                    raise ParseError(path, lineno, "vertex count is not an integer")
        elif keyword == "property":
            if in_vertex:
                if len(parts) != 3 or parts[1] not in _PLY_COORD_TYPES:
                    raise ParseError(path, lineno, "unsupported vertex property %r" % line.strip())
                properties.append(parts[2])
        elif keyword == "end_header":
            header_end = lineno
            break
        else:
            raise ParseError(path, lineno, "unexpected header keyword %r" % keyword)

    if header_end is None:
        raise ParseError(path, len(lines), "missing end_header")
    if vertex_count is None:
        raise ParseError(path, header_end, "no `element vertex` declared")
    if properties != ["x", "y", "z"]:
        raise ParseError(path, header_end, "vertex properties must be exactly x y z")

    points = []
    body = lines[header_end:]
    for offset in range(vertex_count):
        lineno = header_end + offset + 1
        if offset >= len(body):
            raise ParseError(path, lineno, "expected %d vertex rows, got %d" % (vertex_count, offset))
        fields = body[offset].split()
        if len(fields) != 3:
            raise ParseError(path, lineno, "expected 3 columns, got %d" % len(fields))
        points.append(_parse_row(fields, path, lineno))
    return points


def write_pointcloud(
    cloud: PointCloud, out: TextIO, format: Union[CloudFormat, str] = CloudFormat.XYZ
) -> None:
    fmt = CloudFormat(format)
    if fmt == CloudFormat.PLY_ASCII:
        out.write("ply\nformat ascii 1.0\n")
        if cloud.id:
            out.write("comment id %s\n" % cloud.id)
        out.write("element vertex %d\n" % cloud.n)
        out.write("property double x\nproperty double y\nproperty double z\nend_header\n")
    elif cloud.id:
        out.write("# id %s\n" % cloud.id)
    for x, y, z in cloud.points:
        out.write("%.17g %.17g %.17g\n" % (x, y, z))


def normalize_unit_sphere(cloud: PointCloud) -> PointCloud:
    """Center on the centroid and scale so the farthest point has norm 1."""
    centered = cloud.points - cloud.points.mean(axis=0)
    radius = np.sqrt((centered * centered).sum(axis=1)).max()
    if radius == 0.0:
        return cloud.with_points(np.zeros_like(centered))
    return cloud.with_points(centered / radius)
