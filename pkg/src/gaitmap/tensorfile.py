"""Bit-exact binary container for 4-d float32 tensors.

Layout (little-endian):

    offset 0   magic   4 bytes  b"GMAP"
    offset 4   version u32      currently 1
    offset 8   dims    4 x u32  (T, C, H, W)
    offset 24  payload T*C*H*W float32, row-major T -> C -> H -> W

The pipeline writes skeleton-map sequences as (T, 2, H, W); the container
itself is generic 4-d so network parameter sets can reuse it.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from gaitmap.errors import TensorFormatError

MAGIC = b"GMAP"
VERSION = 1
_HEADER = struct.Struct("<4sI4I")


def write_tensor_file(path: str | Path, data: np.ndarray) -> None:
    """Write a (T, C, H, W) array as float32; the payload round-trips bit-exactly."""
    if data.ndim != 4:
        raise ValueError(f"expected a 4-d tensor, got shape {data.shape}")
    arr = np.ascontiguousarray(data, dtype="<f4")
    header = _HEADER.pack(MAGIC, VERSION, *arr.shape)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(arr.tobytes())


def read_tensor_file(path: str | Path) -> tuple[np.ndarray, tuple[int, int, int, int]]:
    """Read a tensor container; returns (float32 array, dims).

    Raises TensorFormatError naming the byte offset of the first problem.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise TensorFormatError(len(raw), f"header truncated ({len(raw)} of {_HEADER.size} bytes)")
    magic, version, t, c, h, w = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise TensorFormatError(0, f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise TensorFormatError(4, f"unsupported version {version}, expected {VERSION}")
    dims = (t, c, h, w)
    if min(dims) < 1:
        raise TensorFormatError(8, f"dims must all be positive, got {dims}")
    expected = 4 * t * c * h * w
    got = len(raw) - _HEADER.size
    if got != expected:
        offset = _HEADER.size + min(got, expected)
        raise TensorFormatError(
            offset, f"payload is {got} bytes, dims {dims} require {expected}"
        )
    data = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).reshape(dims)
    return data.copy(), dims
