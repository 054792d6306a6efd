"""
Trapdoor one-way function (Gen, Eval, Inv) over a trapdoor world.

Gen samples td and decodes pk = G(td); Eval decodes F(pk, x); Inv decodes
I(td, y). Every output is decoded bit by bit with enough repetitions that the
whole string is correct with probability at least 1 - 2^-n.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

from forrelab.core.bits import bits_to_int, int_to_bits, is_bitstring
from forrelab.core.config.settings import settings
from forrelab.core.errors import ShapeMismatchError
from forrelab.core.randomness import SeedLike, make_rng
from forrelab.services.oracle_world.addressing import (
    REGION_G,
    REGION_I,
    REGION_PK_MAP,
    BlockKey,
    block_prefix,
    output_width,
)
from forrelab.services.oracle_world.handle import OracleHandle
from forrelab.services.oracle_world.profile import ScaleProfile, WorldKind
from .budget import repetitions_for, union_budget

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrapdoorKeys:
    """Public key (3n bits) and trapdoor (n bits)."""
    pk: str
    td: str


def _profile(handle: OracleHandle) -> ScaleProfile:
    profile = handle.profile
    if profile.kind is not WorldKind.TRAPDOOR:
        raise ShapeMismatchError("trapdoor operations need a trapdoor world")
    return profile


def _check(value: str, width: int, what: str):
    if len(value) != width or not is_bitstring(value):
        raise ShapeMismatchError(f"{what} must be {width} bits, got {value!r}")


def region_repetitions(profile: ScaleProfile, region: str, floor: Optional[int] = None) -> int:
    """Repetitions per bit so one whole output of ``region`` decodes correctly w.p. 1 - 2^-n."""
    floor = settings.decode_repetitions if floor is None else floor
    return repetitions_for(output_width(profile, region), profile.n, floor)


def _decode_slice(
    handle: OracleHandle, region: str, row: tuple[int, ...], first_col: int, reps: int
) -> str:
    profile = handle.profile
    width = output_width(profile, region)
    prefixes = [
        block_prefix(profile, BlockKey(region, row, first_col + i)) for i in range(width)
    ]
    return handle.decode_string(prefixes, reps)


def towf_gen(handle: OracleHandle, seed: SeedLike, repetitions: Optional[int] = None) -> TrapdoorKeys:
    """
    Sample a uniform trapdoor and decode its public key from G.

    Returns:
        TrapdoorKeys: (pk, td); pk equals G(td) up to the amplified decode error
    """
    profile = _profile(handle)
    td = int(make_rng(seed).integers(0, 1 << profile.n))
    reps = region_repetitions(profile, REGION_G, handle.repetitions) if repetitions is None else repetitions
    pk = _decode_slice(handle, REGION_G, (td,), 0, reps)
    return TrapdoorKeys(pk=pk, td=int_to_bits(td, profile.n))


def towf_eval(handle: OracleHandle, pk: str, x: str, repetitions: Optional[int] = None) -> str:
    """Decode F(pk, x): 6n bits."""
    profile = _profile(handle)
    _check(pk, profile.lam, "pk")
    _check(x, profile.n, "x")
    reps = region_repetitions(profile, REGION_PK_MAP, handle.repetitions) if repetitions is None else repetitions
    return _decode_slice(handle, REGION_PK_MAP, (bits_to_int(pk), bits_to_int(x)), 0, reps)


def towf_inv(handle: OracleHandle, td: str, y: str, repetitions: Optional[int] = None) -> Optional[str]:
    """
    Decode I(td, y).

    Returns:
        str | None: the n-bit preimage, or None when I(td, y) is undefined
    """
    profile = _profile(handle)
    _check(td, profile.n, "td")
    _check(y, profile.m, "y")
    reps = region_repetitions(profile, REGION_I, handle.repetitions) if repetitions is None else repetitions
    first = bits_to_int(y) * (profile.n + 1)
    encoded = _decode_slice(handle, REGION_I, (bits_to_int(td),), first, reps)
    if encoded[0] == "0":
        return None
    return encoded[1:]


def gen_error_budget(profile: ScaleProfile, repetitions: Optional[int] = None) -> float:
    return union_budget(profile.lam, region_repetitions(profile, REGION_G, repetitions))


def eval_error_budget(profile: ScaleProfile, repetitions: Optional[int] = None) -> float:
    return union_budget(profile.m, region_repetitions(profile, REGION_PK_MAP, repetitions))


def inv_error_budget(profile: ScaleProfile, repetitions: Optional[int] = None) -> float:
    return union_budget(profile.n + 1, region_repetitions(profile, REGION_I, repetitions))


def pk_collision_probability(profile: ScaleProfile) -> float:
    """Exact probability that F(pk, .) is not injective for a fixed pk: 2^n uniform m-bit outputs collide."""
    outputs = 1 << profile.m
    return 1.0 - math.prod(1.0 - i / outputs for i in range(1 << profile.n))
