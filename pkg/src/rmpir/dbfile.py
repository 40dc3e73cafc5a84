"""Binary database file: ``RMPIR1`` magic, M/L/k header, bit-packed rows."""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import MalformedDatabase

MAGIC = b"RMPIR1"
HEADER = struct.Struct("<6sIII")


def dumps(data: np.ndarray) -> bytes:
    """Serialize an (M, L, k) bit array; each row of k bits is padded to whole bytes."""
    data = np.asarray(data, dtype=np.uint8)
    if data.ndim != 3:
        raise ValueError(f"expected an (M, L, k) array, got shape {data.shape}")
    M, L, k = data.shape
    payload = np.packbits(data.reshape(M * L, k) & 1, axis=1, bitorder="little")
    return HEADER.pack(MAGIC, M, L, k) + payload.tobytes()


def loads(blob: bytes) -> np.ndarray:
    if len(blob) < HEADER.size:
        raise MalformedDatabase(f"file of {len(blob)} bytes is shorter than the header")
    magic, M, L, k = HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise MalformedDatabase(f"bad magic {magic!r}")
    width = (k + 7) // 8
    expected = HEADER.size + M * L * width
    if len(blob) != expected:
        raise MalformedDatabase(f"expected {expected} bytes for M={M}, L={L}, k={k}, got {len(blob)}")
    rows = np.frombuffer(blob, dtype=np.uint8, offset=HEADER.size).reshape(M * L, width)
    bits = np.unpackbits(rows, axis=1, count=k, bitorder="little")
    return bits.reshape(M, L, k)


def write(path: str | Path, data: np.ndarray) -> None:
    Path(path).write_bytes(dumps(data))


def read(path: str | Path) -> np.ndarray:
    try:
        blob = Path(path).read_bytes()
    except OSError as exc:
        raise MalformedDatabase(f"cannot read {path}: {exc}") from exc
    return loads(blob)
