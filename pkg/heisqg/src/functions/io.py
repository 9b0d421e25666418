"""
Sampled-function container.

Layout:
    b"HQGS"                      magic
    uint32 little-endian         header length in bytes
    header                       UTF-8 JSON: grid, picture, shape, dtype, meta
    samples                      little-endian complex64, row-major (fast, fast, r)
"""

import json
import logging
import struct
from pathlib import Path
from typing import Union

import numpy as np

from functions.grid import Grid, SampledFunction
from utils.errors import HeisqgError

logger = logging.getLogger(__name__)

MAGIC = b"HQGS"
DTYPE = "<c8"


def _json_safe(meta: dict) -> dict:
    out = {}
    for k, v in meta.items():
        if isinstance(v, (np.floating, np.integer, np.bool_)):
            v = v.item()
        if isinstance(v, (str, int, float, bool)) or v is None:
            out[k] = v
    return out


def save_sampled(f: SampledFunction, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {
        "grid": f.grid.to_dict(),
        "picture": f.picture,
        "shape": list(f.samples.shape),
        "dtype": DTYPE,
        "meta": _json_safe(f.meta),
    }
    raw = json.dumps(header, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(raw)))
        fh.write(raw)
        fh.write(np.ascontiguousarray(f.samples, dtype=DTYPE).tobytes(order="C"))
    logger.debug("saved %s (%s, %s)", path, f.picture, f.samples.shape)
    return path


def load_sampled(path: Union[str, Path]) -> SampledFunction:
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise HeisqgError(f"{path}: not a sampled-function file")
    (length,) = struct.unpack("<I", data[4:8])
    header = json.loads(data[8:8 + length].decode("utf-8"))
    shape = tuple(header["shape"])
    body = data[8 + length:]
    expected = int(np.prod(shape)) * np.dtype(DTYPE).itemsize
    if len(body) != expected:
        raise HeisqgError(f"{path}: expected {expected} sample bytes, found {len(body)}")
    samples = np.frombuffer(body, dtype=DTYPE).reshape(shape).astype(complex)
    return SampledFunction(Grid(**header["grid"]), samples, header["picture"], header.get("meta", {}))
