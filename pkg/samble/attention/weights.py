import logging
import struct

import numpy as np

from ..internal.errors import FormatError, ShapeMismatchError
from .types import WeightSet

logger = logging.getLogger(__name__)

WEIGHTS_MAGIC = b"SAMBLEWT"
WEIGHTS_VERSION = 1
_HEADER = struct.Struct("<8sIIII")
_FLOAT = np.dtype("<f8")


def init_weights(d_in: int, d: int, n_b: int, seed: int) -> WeightSet:
    """Seeded stand-in for trained parameters: N(0, 1/d_in) entries."""
    if d_in < 1 or d < 1 or n_b < 0:
        raise ShapeMismatchError("weight dimensions must be >= 1 and n_b >= 0")
    rng = np.random.default_rng(seed)
    scale = 1.0 / np.sqrt(d_in)
    w_q = rng.standard_normal((d_in, d)) * scale
    w_k = rng.standard_normal((d_in, d)) * scale
    tokens = rng.standard_normal((n_b, d_in)) * scale
    return WeightSet(w_q, w_k, tokens, seed=seed, source="seed:%d" % seed)


def save_weights(ws: WeightSet, path: str) -> None:
    header = _HEADER.pack(WEIGHTS_MAGIC, WEIGHTS_VERSION, ws.d_in, ws.d, ws.n_b)
    with open(path, "wb") as fh:
        fh.write(header)
        for block in (ws.w_q, ws.w_k, ws.bin_tokens):
            fh.write(np.ascontiguousarray(block, dtype=_FLOAT).tobytes())
    logger.debug("saved weights d_in=%d d=%d n_b=%d to %s", ws.d_in, ws.d, ws.n_b, path)


def load_weights(path: str) -> WeightSet:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise FormatError("%s: truncated weights header" % path)
    magic, version, d_in, d, n_b = _HEADER.unpack_from(blob)
    if magic != WEIGHTS_MAGIC:
        raise FormatError("%s: not a weights file (bad magic)" % path)
    if version != WEIGHTS_VERSION:
        raise FormatError("%s: unsupported weights version %d" % (path, version))
    if d_in < 1 or d < 1:
        raise FormatError("%s: header declares empty projections" % path)

    payload = blob[_HEADER.size :]
    expected = (2 * d_in * d + n_b * d_in) * _FLOAT.itemsize
    if len(payload) != expected:
        raise FormatError(
            "%s: header declares d_in=%d d=%d n_b=%d (%d payload bytes), file holds %d"
            % (path, d_in, d, n_b, expected, len(payload))
        )
    values = np.frombuffer(payload, dtype=_FLOAT).astype(np.float64)
    w_q = values[: d_in * d].reshape(d_in, d)
    w_k = values[d_in * d : 2 * d_in * d].reshape(d_in, d)
    tokens = values[2 * d_in * d :].reshape(n_b, d_in)
    return WeightSet(w_q, w_k, tokens, source=path)
