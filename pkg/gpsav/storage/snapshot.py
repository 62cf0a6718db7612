"""
GPSAVFLD binary field snapshots

Layout (little-endian):
    16 bytes  magic "GPSAVFLD" + 7 zero bytes + 0x01
    u32       dim
    u32 x 3   sizes (unused axes = 1)
    f64 x 3   lower (unused axes = 0)
    f64 x 3   upper (unused axes = 1)
    f64       time
    f64       q
    c16 x n   field values, x-index fastest
"""

import logging
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from gpsav.core.grid import Field, Grid, make_grid
from gpsav.exceptions import InvalidArgumentError, SnapshotFormatError

logger = logging.getLogger(__name__)

MAGIC = b"GPSAVFLD" + b"\x00" * 7 + b"\x01"
_HEADER = struct.Struct("<4I6d2d")
HEADER_SIZE = len(MAGIC) + _HEADER.size


@dataclass(frozen=True)
class Snapshot:
    """A stored field with its time and auxiliary variable"""
    psi: Field
    time: float
    q: float

    @property
    def grid(self) -> Grid:
        return self.psi.grid


def _pad(values, fill) -> list:
    return list(values) + [fill] * (3 - len(values))


def encode_snapshot(psi: Field, time: float, q: float) -> bytes:
    grid = psi.grid
    header = _HEADER.pack(
        grid.dim,
        *_pad(grid.sizes, 1),
        *_pad(grid.lower, 0.0),
        *_pad(grid.upper, 1.0),
        float(time),
        float(q),
    )
    return MAGIC + header + psi.data.astype("<c16").tobytes()


def decode_snapshot(payload: bytes, source: str = "<bytes>") -> Snapshot:
    """
    Raises:
        SnapshotFormatError: On bad magic, short header, bad grid or wrong payload length
    """
    if len(payload) < HEADER_SIZE:
        raise SnapshotFormatError(f"{source}: truncated header ({len(payload)} bytes)")
    if payload[: len(MAGIC)] != MAGIC:
        raise SnapshotFormatError(f"{source}: bad magic {payload[:len(MAGIC)]!r}")

    fields = _HEADER.unpack_from(payload, len(MAGIC))
    dim = fields[0]
    sizes, lower, upper = fields[1:4], fields[4:7], fields[7:10]
    time, q = fields[10], fields[11]
    if dim not in (1, 2, 3):
        raise SnapshotFormatError(f"{source}: invalid dim {dim}")
    for size in sizes[:dim]:
        if size < 4 or size % 2:
            raise SnapshotFormatError(f"{source}: invalid size {size} in header")

    # length check before any grid arrays are allocated
    body = payload[HEADER_SIZE:]
    expected = 16 * math.prod(sizes[:dim])
    if len(body) != expected:
        raise SnapshotFormatError(
            f"{source}: expected {expected} data bytes for sizes {tuple(sizes[:dim])}, got {len(body)}"
        )
    try:
        grid = make_grid(dim, sizes[:dim], lower[:dim], upper[:dim])
    except InvalidArgumentError as e:
        raise SnapshotFormatError(f"{source}: invalid grid in header: {e}")

    data = np.frombuffer(body, dtype="<c16").astype(np.complex128)
    return Snapshot(psi=Field(grid=grid, data=data), time=time, q=q)


def write_snapshot(path: Path, psi: Field, time: float, q: float) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_snapshot(psi, time, q))
    logger.debug("wrote snapshot %s (t=%g)", path, time)
    return path


def read_snapshot(path: Path) -> Snapshot:
    path = Path(path)
    try:
        payload = path.read_bytes()
    except FileNotFoundError:
        raise SnapshotFormatError(f"{path}: no such snapshot file")
    return decode_snapshot(payload, source=str(path))
