"""Binary field snapshots.

Layout: magic "GKDV", version u32, L f64, n u64, t f64, then n little-endian
f64 samples.  Round-trips are bit exact.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .grid import Field, Grid1D

MAGIC = b"GKDV"
VERSION = 1
_HEADER = struct.Struct("<4sIdQd")


class SnapshotError(IOError):
    pass


def save_snapshot(f: Field, t: float, path) -> None:
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, f.grid.length, f.grid.n, float(t)))
        fh.write(np.ascontiguousarray(f.values, dtype="<f8").tobytes())


def load_snapshot(path) -> tuple[Field, float]:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < _HEADER.size:
        raise SnapshotError(f"{path}: truncated header ({len(raw)} bytes)")
    magic, version, length, n, t = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise SnapshotError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise SnapshotError(f"{path}: unsupported version {version}, expected {VERSION}")
    need = _HEADER.size + 8 * n
    if len(raw) != need:
        raise SnapshotError(f"{path}: expected {need} bytes for n={n}, got {len(raw)}")
    values = np.frombuffer(raw, dtype="<f8", count=n, offset=_HEADER.size)
    return Field(Grid1D(length, int(n)), values.astype(float)), float(t)
