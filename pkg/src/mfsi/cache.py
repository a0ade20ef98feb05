"""Binary caching of expensive tables (spf arrays and tau coefficients).

File layout, all little-endian:
    magic   4 bytes  "MFSI"
    version u32      1
    kind    u8       0 = spf (u32 entries), 1 = tau (i128), 2 = tau (i256)
    limit   u64      table limit X
    checksum u64     XOR-fold of the payload bytes in u64 words
    payload
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .arith import FactorTable
from .catalog import CuspFormTable

MAGIC = b"MFSI"
VERSION = 1

KIND_SPF = 0
KIND_TAU_128 = 1
KIND_TAU_256 = 2

_HEADER = struct.Struct("<4sIBQQ")


class CacheError(Exception):
    """Raised on any malformed, truncated or checksum-failing cache file."""


def cache_dir() -> Path:
    d = os.environ.get("MFSI_CACHE_DIR")
    path = Path(d) if d else Path.home() / ".cache" / "mfsi"
    path.mkdir(parents=True, exist_ok=True)
    return path


def _xor_fold(payload: bytes) -> int:
    pad = (-len(payload)) % 8
    arr = np.frombuffer(payload + b"\0" * pad, dtype="<u8")
    return int(np.bitwise_xor.reduce(arr)) if len(arr) else 0


def _write(path: Path, kind: int, limit: int, payload: bytes) -> None:
    header = _HEADER.pack(MAGIC, VERSION, kind, limit, _xor_fold(payload))
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(header)
        fh.write(payload)
    os.replace(tmp, path)


def _read(path: Path) -> tuple[int, int, bytes]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise CacheError(f"cannot read cache file {path}: {exc}") from exc
    if len(raw) < _HEADER.size:
        raise CacheError(f"truncated cache file {path}")
    magic, version, kind, limit, checksum = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CacheError(f"bad magic in {path}")
    if version != VERSION:
        raise CacheError(f"unsupported cache version {version} in {path}")
    payload = raw[_HEADER.size :]
    if _xor_fold(payload) != checksum:
        raise CacheError(f"checksum mismatch in {path}")
    return kind, limit, payload


def save_spf(ft: FactorTable, path: Path) -> None:
    payload = ft.spf.astype("<u4").tobytes()
    _write(Path(path), KIND_SPF, ft.limit, payload)


def load_spf(path: Path) -> FactorTable:
    kind, limit, payload = _read(Path(path))
    if kind != KIND_SPF:
        raise CacheError(f"expected spf cache, found kind {kind}")
    expect = (limit + 1) * 4
    if len(payload) != expect:
        raise CacheError(f"payload length {len(payload)} != expected {expect}")
    spf = np.frombuffer(payload, dtype="<u4").astype(np.uint32)
    return FactorTable(limit=int(limit), spf=spf)


def _int_to_bytes(v: int, width: int) -> bytes:
    return int(v).to_bytes(width, "little", signed=True)


def save_tau(table: CuspFormTable, path: Path) -> None:
    """Fixed-width signed little-endian tau entries; width by magnitude."""
    max_abs = max((abs(int(t)) for t in table.tau[1:]), default=0)
    if max_abs < 1 << 127:
        kind, width = KIND_TAU_128, 16
    elif max_abs < 1 << 255:
        kind, width = KIND_TAU_256, 32
    else:
        raise CacheError("tau values exceed 256-bit range")
    payload = b"".join(_int_to_bytes(int(t), width)
                       for t in table.tau[1 : table.limit + 1])
    _write(Path(path), kind, table.limit, payload)


def load_tau(path: Path) -> CuspFormTable:
    kind, limit, payload = _read(Path(path))
    if kind not in (KIND_TAU_128, KIND_TAU_256):
        raise CacheError(f"expected tau cache, found kind {kind}")
    width = 16 if kind == KIND_TAU_128 else 32
    if len(payload) != limit * width:
        raise CacheError(f"payload length {len(payload)} != {limit * width}")
    tau = np.zeros(limit + 1, dtype=object)
    for i in range(limit):
        tau[i + 1] = int.from_bytes(payload[i * width : (i + 1) * width],
                                    "little", signed=True)
    lam = np.zeros(limit + 1, dtype=np.float64)
    n = np.arange(1, limit + 1, dtype=np.float64)
    lam[1:] = np.array([float(t) for t in tau[1:]]) / n ** 5.5
    return CuspFormTable(limit=int(limit), tau=tau, lam=lam)
