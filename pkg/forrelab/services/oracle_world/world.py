"""
Oracle worlds: plaintext ground truth plus lazily encoded oracle A.

Every encoded block is a ForrelationInstance drawn from the patterned
distribution of its plaintext bit (Forrelated for 1, uniform for 0). Blocks
are derived deterministically from (world seed, region, row, column, row
salt, pattern bit) and cached process-wide, so worlds never hold their whole
encoding in memory. Resampling a slice returns a new world with new
plaintext for that slice and a fresh salt for its row; every other block is
shared with the original.

Worlds loaded from a snapshot carry the stored blocks and serve them
bit-exactly for every row whose salt is unchanged.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache
from typing import TYPE_CHECKING, Iterator, Mapping, Optional

import numpy as np

from forrelab.core.bits import bit_at, bits_to_int, int_to_bits, is_bitstring
from forrelab.core.config.settings import settings
from forrelab.core.errors import ShapeMismatchError
from forrelab.core.randomness import SeedLike, draw_seed, keyed_seed, make_rng
from forrelab.services.forrelation.decoder import quantum_forrelation_test
from forrelab.services.forrelation.samplers import SamplerKind, sample_patterned_block
from forrelab.services.forrelation.truth_table import ForrelationInstance
from .addressing import (
    REGION_CODES,
    REGION_F,
    REGION_G,
    REGION_I,
    REGION_PK_MAP,
    BlockKey,
    output_width,
    parse_address,
    row_length,
)
from .profile import ScaleProfile, WorldKind

if TYPE_CHECKING:
    from .oracle_b import NpOracleB

logger = logging.getLogger(__name__)

RowId = tuple[str, tuple[int, ...]]


@lru_cache(maxsize=settings.block_cache_size)
def _encode_block(
    seed: int,
    region_code: int,
    row: tuple[int, ...],
    col: int,
    salt: int,
    bit: int,
    ell: int,
    sampler: SamplerKind,
    eps: Optional[float],
) -> ForrelationInstance:
    sub_seed = keyed_seed(seed, region_code, *row, col, salt, bit)
    return sample_patterned_block(ell, bit, sampler, sub_seed, eps)


@dataclass(frozen=True, eq=False)
class OracleWorld:
    """
    Common state of PRF and trapdoor worlds.

    Attributes:
        profile (ScaleProfile): sizes and sampler
        seed (int): root of every block's randomness
        salts (Mapping[RowId, int]): per-row salts (missing rows use 0)
        stored (Mapping[BlockKey, tuple[int, ForrelationInstance]]): blocks
            loaded from a snapshot, with the salt they were stored under
    """
    profile: ScaleProfile
    seed: int
    salts: Mapping[RowId, int] = field(default_factory=dict)
    stored: Optional[Mapping[BlockKey, tuple[int, ForrelationInstance]]] = None

    @property
    def n(self) -> int:
        return self.profile.n

    @property
    def ell(self) -> int:
        return self.profile.ell

    def row_salt(self, region: str, row: tuple[int, ...]) -> int:
        return self.salts.get((region, row), 0)

    def pattern_bit(self, key: BlockKey) -> int:
        raise NotImplementedError

    def regions(self) -> tuple[str, ...]:
        raise NotImplementedError

    def rows(self, region: str) -> Iterator[tuple[int, ...]]:
        raise NotImplementedError

    def row_keys(self, region: str, row: tuple[int, ...]) -> list[BlockKey]:
        return [BlockKey(region, row, c) for c in range(row_length(self.profile, region))]

    def block_keys(self) -> Iterator[BlockKey]:
        """Every block in address order."""
        for region in self.regions():
            for row in self.rows(region):
                yield from self.row_keys(region, row)

    def block(self, key: BlockKey) -> ForrelationInstance:
        """The encoded block at ``key``."""
        salt = self.row_salt(key.region, key.row)
        if self.stored is not None:
            hit = self.stored.get(key)
            if hit is not None and hit[0] == salt:
                return hit[1]
        return _encode_block(
            self.seed,
            REGION_CODES[key.region],
            key.row,
            key.col,
            salt,
            self.pattern_bit(key),
            self.profile.ell,
            self.profile.sampler,
            self.profile.eps,
        )

    def row_bits(self, region: str, row: tuple[int, ...]) -> np.ndarray:
        """Concatenated encoding of one row (N blocks of L bits)."""
        return np.concatenate([self.block(k).bits for k in self.row_keys(region, row)])

    def read_a(self, address: str) -> int:
        """
        Oracle A: the encoded bit at ``address``, 0 for anything that does
        not parse as an address of this world.
        """
        parsed = parse_address(self.profile, address)
        if parsed is None:
            return 0
        key, position = parsed
        return self.block(key).bit(position)

    def provenance_matches(self, key: BlockKey) -> bool:
        return self.block(key).provenance.is_forrelated == bool(self.pattern_bit(key))

    @cached_property
    def oracle_b(self) -> NpOracleB:
        from .oracle_b import NpOracleB

        return NpOracleB(self)

    def _new_salt(self, seed: SeedLike) -> int:
        return draw_seed(make_rng(seed))

    def resample(self, region: str, row: tuple[int, ...], pattern: str, seed: SeedLike) -> OracleWorld:
        raise NotImplementedError


def _check_pattern(pattern: str, width: int, what: str):
    if len(pattern) != width or not is_bitstring(pattern):
        raise ShapeMismatchError(f"{what} needs a {width}-bit pattern, got {pattern!r}")


def _read_only(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PrfOracleWorld(OracleWorld):
    """
    Oracle A of keyed functions: row k of region ``f`` encodes the truth
    table of f_k, one block per input x.
    """
    table: np.ndarray = None

    def regions(self):
        return (REGION_F,)

    def rows(self, region):
        return ((k,) for k in range(1 << self.n))

    def pattern_bit(self, key):
        return int(self.table[key.row[0], key.col])

    def f_k(self, k: int) -> str:
        """Truth table of f_k as a bit string over x = 0 .. 2^n - 1."""
        return "".join(str(int(b)) for b in self.table[k])

    def resample(self, region, row, pattern, seed):
        if region != REGION_F or len(row) != 1 or not 0 <= row[0] < (1 << self.n):
            raise ShapeMismatchError(f"PRF worlds have rows ('f', (k,)), got {(region, row)}")
        _check_pattern(pattern, 1 << self.n, "a PRF row")
        table = self.table.copy()
        table[row[0]] = [int(c) for c in pattern]
        salts = dict(self.salts)
        salts[(region, row)] = self._new_salt(seed)
        return replace(self, table=_read_only(table), salts=salts)


@dataclass(frozen=True, eq=False)
class TrapdoorOracleWorld(OracleWorld):
    """
    Trapdoor oracle: G maps td (n bits) to pk (3n bits), F maps (pk, x) to
    6n bits, and I(td, y) is the lexicographically smallest x with
    F(G(td), x) = y, or undefined.
    """
    G: np.ndarray = None
    F: np.ndarray = None

    def regions(self):
        return (REGION_G, REGION_PK_MAP, REGION_I)

    def rows(self, region):
        n = self.n
        if region == REGION_PK_MAP:
            return ((pk, x) for pk in range(1 << self.profile.lam) for x in range(1 << n))
        return ((td,) for td in range(1 << n))

    @cached_property
    def _inverse_tables(self) -> dict[int, dict[int, int]]:
        return {}

    def inverse_table(self, pk: int) -> dict[int, int]:
        """y -> smallest preimage x under F(pk, .)."""
        table = self._inverse_tables.get(pk)
        if table is None:
            table = {}
            row = self.F[pk]
            for x in range(len(row) - 1, -1, -1):
                table[int(row[x])] = x
            self._inverse_tables[pk] = table
        return table

    def g(self, td: int) -> int:
        return int(self.G[td])

    def f(self, pk: int, x: int) -> int:
        return int(self.F[pk, x])

    def inv(self, td: int, y: int) -> Optional[int]:
        return self.inverse_table(self.g(td)).get(y)

    def is_injective(self, pk: int) -> bool:
        return len(self.inverse_table(pk)) == (1 << self.n)

    def i_encoding(self, td: int, y: int) -> int:
        """I output as n+1 bits: defined flag then x, or 0 for undefined."""
        x = self.inv(td, y)
        return 0 if x is None else (1 << self.n) | x

    def pattern_bit(self, key):
        n = self.n
        if key.region == REGION_G:
            return bit_at(self.g(key.row[0]), self.profile.lam, key.col)
        if key.region == REGION_PK_MAP:
            pk, x = key.row
            return bit_at(self.f(pk, x), self.profile.m, key.col)
        y_i, index = divmod(key.col, n + 1)
        return bit_at(self.i_encoding(key.row[0], y_i), n + 1, index)

    def resample(self, region, row, pattern, seed):
        salt = self._new_salt(seed)
        salts = dict(self.salts)
        n = self.n
        if region == REGION_G and len(row) == 1 and 0 <= row[0] < (1 << n):
            _check_pattern(pattern, self.profile.lam, "a G row")
            G = self.G.copy()
            G[row[0]] = bits_to_int(pattern)
            salts[(REGION_G, row)] = salt
            salts[(REGION_I, row)] = salt
            return replace(self, G=_read_only(G), salts=salts)
        if (
            region == REGION_PK_MAP
            and len(row) == 2
            and 0 <= row[0] < (1 << self.profile.lam)
            and 0 <= row[1] < (1 << n)
        ):
            _check_pattern(pattern, self.profile.m, "an F row")
            F = self.F.copy()
            F[row] = bits_to_int(pattern)
            salts[(REGION_PK_MAP, row)] = salt
            for td in np.flatnonzero(self.G == row[0]):
                salts[(REGION_I, (int(td),))] = salt
            return replace(self, F=_read_only(F), salts=salts)
        raise ShapeMismatchError(
            f"trapdoor worlds resample ('G', (td,)) or ('F', (pk, x)), got {(region, row)}"
        )


def sample_prf_world(profile: ScaleProfile, seed: SeedLike) -> PrfOracleWorld:
    """
    Sample f_k for every key uniformly and encode each row with P_{f_k, L}.

    Args:
        profile (ScaleProfile): a PRF profile
        seed: world seed

    Returns:
        PrfOracleWorld: the sampled world

    Raises:
        BudgetExceededError: if the profile exceeds the memory budget
    """
    if profile.kind is not WorldKind.PRF:
        raise ShapeMismatchError(f"expected a PRF profile, got {profile.kind.value}")
    profile.check_budget(settings.memory_budget_bits, settings.block_cache_size)
    rng = make_rng(seed)
    world_seed = draw_seed(rng)
    size = 1 << profile.n
    table = rng.integers(0, 2, size=(size, size), dtype=np.uint8)
    logger.debug(f"Sampled PRF world {profile.describe()} seed={world_seed}")
    return PrfOracleWorld(profile=profile, seed=world_seed, table=_read_only(table))


def sample_trapdoor_world(profile: ScaleProfile, seed: SeedLike) -> TrapdoorOracleWorld:
    """
    Sample uniform G and F; I is derived from them on demand.

    Args:
        profile (ScaleProfile): a trapdoor profile
        seed: world seed

    Returns:
        TrapdoorOracleWorld: the sampled world
    """
    if profile.kind is not WorldKind.TRAPDOOR:
        raise ShapeMismatchError(f"expected a trapdoor profile, got {profile.kind.value}")
    profile.check_budget(settings.memory_budget_bits, settings.block_cache_size)
    rng = make_rng(seed)
    world_seed = draw_seed(rng)
    n = profile.n
    G = rng.integers(0, 1 << profile.lam, size=1 << n, dtype=np.int64)
    F = rng.integers(0, 1 << profile.m, size=(1 << profile.lam, 1 << n), dtype=np.int64)
    logger.debug(f"Sampled trapdoor world {profile.describe()} seed={world_seed}")
    return TrapdoorOracleWorld(
        profile=profile, seed=world_seed, G=_read_only(G), F=_read_only(F)
    )


def sample_world(profile: ScaleProfile, seed: SeedLike) -> OracleWorld:
    if profile.kind is WorldKind.PRF:
        return sample_prf_world(profile, seed)
    return sample_trapdoor_world(profile, seed)


def resample_block(
    world: OracleWorld,
    region_id: str,
    block_selector: tuple[int, ...],
    new_pattern_bits: str,
    seed: SeedLike,
) -> OracleWorld:
    """
    Replace one slice's plaintext and redraw its encoding.

    PRF slices are rows ('f', (k,)) with a 2^n-bit pattern. Trapdoor slices are
    ('G', (td,)) with a 3n-bit public key or ('F', (pk, x)) with a 6n-bit
    image; the I rows that depend on the changed slice are re-encoded too so
    I stays the inverse of F(G(td), .). The input world is not modified.
    """
    updated = world.resample(region_id, tuple(int(v) for v in block_selector), new_pattern_bits, seed)
    logger.debug(f"Resampled {region_id}{tuple(block_selector)} -> {new_pattern_bits}")
    return updated


def plant_public_key(world: TrapdoorOracleWorld, td: int, pk: int, seed: SeedLike) -> TrapdoorOracleWorld:
    """Set G(td) = pk; I(td, .) becomes F(pk, .)^-1 and both are re-encoded."""
    return world.resample(REGION_G, (td,), int_to_bits(pk, world.profile.lam), seed)


def plant_image(
    world: TrapdoorOracleWorld, pk: int, x: int, y: int, seed: SeedLike
) -> TrapdoorOracleWorld:
    """Set F(pk, x) = y and re-encode it."""
    return world.resample(REGION_PK_MAP, (pk, x), int_to_bits(y, world.profile.m), seed)


def decode_bit(
    world: OracleWorld,
    key: BlockKey,
    repetitions: int,
    threshold: Optional[float] = None,
    seed: SeedLike = None,
) -> int:
    """
    Decode the pattern bit of block ``key`` with the amplified forrelation test.
    """
    threshold = settings.decode_threshold if threshold is None else threshold
    return quantum_forrelation_test(world.block(key), repetitions, threshold, seed)


def output_bits(world: OracleWorld, region: str, row: tuple[int, ...], first_col: int = 0) -> str:
    """Plaintext output bits of one G / F slice, or one I value at ``first_col``."""
    width = output_width(world.profile, region)
    return "".join(
        str(world.pattern_bit(BlockKey(region, row, first_col + i))) for i in range(width)
    )


def differing_blocks(
    a: OracleWorld, b: OracleWorld, regions: Optional[tuple[str, ...]] = None
) -> list[BlockKey]:
    """
    Blocks whose encoded bits differ between two worlds of the same profile,
    by exhaustive scan of ``regions`` (all regions by default).
    """
    if a.profile != b.profile:
        raise ShapeMismatchError("worlds have different profiles")
    wanted = a.regions() if regions is None else regions
    return [
        key
        for key in a.block_keys()
        if key.region in wanted and not np.array_equal(a.block(key).bits, b.block(key).bits)
    ]
