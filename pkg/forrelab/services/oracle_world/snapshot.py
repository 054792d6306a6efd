"""
World snapshots.

Layout (all integers little-endian):

    magic  b"FRLB"  | version u16
    profile JSON    (u32 length + UTF-8)
    world seed u64
    salts           (u32 count, then per row: region u8, arity u8,
                     row values u64 each, salt u64)
    plaintext       PRF: packed f table (u32 length + bytes)
                    trapdoor: G then F as u64 arrays
    blocks          (u64 count, then every block in address order as
                     TruthTable f, TruthTable g, provenance byte)

A loaded world serves the stored blocks bit-exactly.
"""
import hashlib
import logging
import struct
from dataclasses import replace
from pathlib import Path
from typing import Union

import numpy as np

from forrelab.core.config.settings import settings
from forrelab.core.errors import BudgetExceededError, ShapeMismatchError, SnapshotFormatError
from forrelab.services.forrelation.truth_table import ForrelationInstance
from .addressing import REGION_CODES
from .profile import ScaleProfile, WorldKind
from .world import OracleWorld, PrfOracleWorld, TrapdoorOracleWorld

logger = logging.getLogger(__name__)

MAGIC = b"FRLB"
VERSION = 1
_CODE_REGIONS = {code: region for region, code in REGION_CODES.items()}


def _header_bytes(world: OracleWorld) -> bytes:
    profile_json = world.profile.model_dump_json().encode("utf-8")
    out = [MAGIC, struct.pack("<H", VERSION), struct.pack("<I", len(profile_json)), profile_json]
    out.append(struct.pack("<Q", world.seed))
    salts = sorted(world.salts.items())
    out.append(struct.pack("<I", len(salts)))
    for (region, row), salt in salts:
        out.append(struct.pack("<BB", REGION_CODES[region], len(row)))
        out.append(struct.pack(f"<{len(row)}Q", *row))
        out.append(struct.pack("<Q", salt))
    return b"".join(out)


def _plaintext_bytes(world: OracleWorld) -> bytes:
    if isinstance(world, PrfOracleWorld):
        packed = np.packbits(world.table.reshape(-1)).tobytes()
        return struct.pack("<I", len(packed)) + packed
    return world.G.astype("<u8").tobytes() + world.F.astype("<u8").tobytes()


def world_digest(world: OracleWorld) -> str:
    """sha256 of the header and plaintext: identical for identical worlds."""
    h = hashlib.sha256()
    h.update(_header_bytes(world))
    h.update(_plaintext_bytes(world))
    return h.hexdigest()


def save_world(world: OracleWorld, path: Union[str, Path]) -> int:
    """
    Write a full snapshot, encoding every block.

    Returns:
        int: number of bytes written

    Raises:
        BudgetExceededError: if the encoding exceeds ``snapshot_max_bits``
    """
    if world.profile.encoded_bits > settings.snapshot_max_bits:
        raise BudgetExceededError(
            f"snapshot would hold {world.profile.encoded_bits} encoded bits, "
            f"limit is {settings.snapshot_max_bits}"
        )
    chunks = [_header_bytes(world), _plaintext_bytes(world)]
    keys = list(world.block_keys())
    chunks.append(struct.pack("<Q", len(keys)))
    chunks.extend(world.block(k).to_bytes() for k in keys)
    data = b"".join(chunks)
    Path(path).write_bytes(data)
    logger.info(f"Saved {world.profile.describe()} snapshot ({len(keys)} blocks, {len(data)} bytes) to {path}")
    return len(data)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, size: int) -> bytes:
        if self.pos + size > len(self.data):
            raise SnapshotFormatError(f"snapshot truncated at byte {self.pos}")
        chunk = self.data[self.pos:self.pos + size]
        self.pos += size
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def load_world(path: Union[str, Path]) -> OracleWorld:
    """
    Read a snapshot written by ``save_world``.

    Raises:
        SnapshotFormatError: on a bad magic, unknown version or truncated data
    """
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise SnapshotFormatError(f"cannot read snapshot {path}: {e}") from e
    reader = _Reader(data)
    if reader.take(4) != MAGIC:
        raise SnapshotFormatError(f"{path} is not a world snapshot")
    (version,) = reader.unpack("<H")
    if version != VERSION:
        raise SnapshotFormatError(f"unsupported snapshot version {version}")
    (length,) = reader.unpack("<I")
    try:
        profile = ScaleProfile.model_validate_json(reader.take(length))
    except ValueError as e:
        raise SnapshotFormatError(f"invalid profile in snapshot: {e}") from e
    (seed,) = reader.unpack("<Q")
    (count,) = reader.unpack("<I")
    salts = {}
    for _ in range(count):
        code, arity = reader.unpack("<BB")
        if code not in _CODE_REGIONS:
            raise SnapshotFormatError(f"unknown region code {code}")
        row = tuple(reader.unpack(f"<{arity}Q"))
        (salt,) = reader.unpack("<Q")
        salts[(_CODE_REGIONS[code], row)] = salt

    n = profile.n
    if profile.kind is WorldKind.PRF:
        (size,) = reader.unpack("<I")
        bits = np.unpackbits(np.frombuffer(reader.take(size), dtype=np.uint8))
        table = bits[: 1 << (2 * n)].reshape(1 << n, 1 << n).copy()
        table.setflags(write=False)
        world = PrfOracleWorld(profile=profile, seed=seed, salts=salts, table=table)
    else:
        g_count = 1 << n
        f_count = (1 << profile.lam) * (1 << n)
        G = np.frombuffer(reader.take(8 * g_count), dtype="<u8").astype(np.int64)
        F = np.frombuffer(reader.take(8 * f_count), dtype="<u8").astype(np.int64)
        G.setflags(write=False)
        F = F.reshape(1 << profile.lam, 1 << n)
        F.setflags(write=False)
        world = TrapdoorOracleWorld(profile=profile, seed=seed, salts=salts, G=G, F=F)

    (blocks,) = reader.unpack("<Q")
    keys = list(world.block_keys())
    if blocks != len(keys):
        raise SnapshotFormatError(f"snapshot holds {blocks} blocks, profile needs {len(keys)}")
    stored = {}
    for key in keys:
        try:
            inst, reader.pos = ForrelationInstance.from_bytes(data, reader.pos)
        except ShapeMismatchError as e:
            raise SnapshotFormatError(f"corrupt block {key}: {e}") from e
        if inst.ell != profile.ell:
            raise SnapshotFormatError(f"block {key} has ell={inst.ell}, profile says {profile.ell}")
        stored[key] = (world.row_salt(key.region, key.row), inst)
    if reader.pos != len(data):
        raise SnapshotFormatError("trailing bytes after the last block")
    logger.info(f"Loaded {profile.describe()} snapshot with {blocks} blocks from {path}")
    return replace(world, stored=stored)
