"""Flat little-endian binary layout for complex tensors.

Header (all little-endian)::

    magic  b"FDMT"      4 bytes
    version u32         currently 1
    itemsize u32        8 (complex64) or 16 (complex128)
    ndim u32
    shape  ndim * u64
    config hash         32 raw bytes (SHA-256), zeros when unknown
    seed  i64           -1 when unknown

followed by the row-major data.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"FDMT"
VERSION = 1


def write_tensor(path: str | Path, data: np.ndarray, config_hash: str | None = None,
                 seed: int | None = None, dtype=np.complex128) -> None:
    arr = np.ascontiguousarray(data, dtype=np.dtype(dtype).newbyteorder("<"))
    digest = bytes.fromhex(config_hash) if config_hash else bytes(32)
    header = MAGIC + struct.pack("<III", VERSION, arr.itemsize, arr.ndim)
    header += struct.pack(f"<{arr.ndim}Q", *arr.shape)
    header += digest + struct.pack("<q", -1 if seed is None else int(seed))
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(arr.tobytes(order="C"))


def read_tensor(path: str | Path) -> tuple[np.ndarray, str | None, int | None]:
    """Return ``(data, config_hash, seed)``."""
    raw = Path(path).read_bytes()
    if raw[:4] != MAGIC:
        raise ValueError(f"{path}: not a tensor file")
    version, itemsize, ndim = struct.unpack_from("<III", raw, 4)
    if version != VERSION:
        raise ValueError(f"unsupported tensor version {version}")
    off = 16
    shape = struct.unpack_from(f"<{ndim}Q", raw, off)
    off += 8 * ndim
    digest = raw[off : off + 32]
    off += 32
    (seed,) = struct.unpack_from("<q", raw, off)
    off += 8
    dtype = {8: "<c8", 16: "<c16"}[itemsize]
    data = np.frombuffer(raw, dtype=dtype, offset=off).reshape(shape).copy()
    return data, (digest.hex() if any(digest) else None), (None if seed == -1 else seed)
