"""
Address layout of oracle A.

PRF worlds:        k (n) ‖ x (n) ‖ y (ell + 1)
Trapdoor worlds:   tag (2) ‖ slice arguments ‖ output-bit index ‖ y (ell + 1)

    tag 00  G:  td (n)                  index < 3n
    tag 01  F:  pk (3n) ‖ x (n)         index < 6n
    tag 10  I:  td (n)  ‖ y_I (6n)      index < n + 1

The output-bit index has fixed width ceil(log2(width)). The address without
its trailing y is a *block prefix*: it names one Forrelation block, and y
selects a bit of f ‖ g inside it. Anything that does not parse reads 0.
"""
from dataclasses import dataclass
from typing import Optional

from forrelab.core.bits import bits_to_int, index_width, int_to_bits, is_bitstring
from .profile import ScaleProfile, WorldKind

REGION_F = "f"
REGION_G = "G"
REGION_PK_MAP = "F"
REGION_I = "I"

REGION_CODES = {REGION_F: 0, REGION_G: 1, REGION_PK_MAP: 2, REGION_I: 3}
TRAPDOOR_TAGS = {REGION_G: "00", REGION_PK_MAP: "01", REGION_I: "10"}
_TAG_REGIONS = {tag: region for region, tag in TRAPDOOR_TAGS.items()}


@dataclass(frozen=True, order=True)
class BlockKey:
    """
    One encoded block: ``region``, its ``row`` (the slice arguments) and the
    column inside the row (the input x for PRF rows, the output-bit index for
    G and F rows, y_I * (n + 1) + index for I rows).
    """
    region: str
    row: tuple[int, ...]
    col: int


def _row_fields(profile: ScaleProfile, region: str) -> list[int]:
    if region == REGION_PK_MAP:
        return [profile.lam, profile.n]
    return [profile.n]


def output_width(profile: ScaleProfile, region: str) -> int:
    """Number of encoded output bits per slice argument tuple."""
    if region == REGION_G:
        return profile.lam
    if region == REGION_PK_MAP:
        return profile.m
    if region == REGION_I:
        return profile.n + 1
    return 1


def row_length(profile: ScaleProfile, region: str) -> int:
    """Blocks per row of ``region``."""
    if region == REGION_F:
        return 1 << profile.n
    if region == REGION_I:
        return (1 << profile.m) * (profile.n + 1)
    return output_width(profile, region)


def block_prefix(profile: ScaleProfile, key: BlockKey) -> str:
    """Bit string naming ``key``; append y to get a full address."""
    if profile.kind is WorldKind.PRF:
        (k,) = key.row
        return int_to_bits(k, profile.n) + int_to_bits(key.col, profile.n)
    parts = [TRAPDOOR_TAGS[key.region]]
    parts += [int_to_bits(v, w) for v, w in zip(key.row, _row_fields(profile, key.region))]
    width = output_width(profile, key.region)
    if key.region == REGION_I:
        y_i, index = divmod(key.col, profile.n + 1)
        parts.append(int_to_bits(y_i, profile.m))
    else:
        index = key.col
    parts.append(int_to_bits(index, index_width(width)))
    return "".join(parts)


def address_of(profile: ScaleProfile, key: BlockKey, y: int) -> str:
    return block_prefix(profile, key) + int_to_bits(y, profile.y_width)


def parse_block_prefix(profile: ScaleProfile, prefix: str) -> Optional[BlockKey]:
    """Inverse of ``block_prefix``; None for anything malformed."""
    if not is_bitstring(prefix):
        return None
    n = profile.n
    if profile.kind is WorldKind.PRF:
        if len(prefix) != 2 * n:
            return None
        return BlockKey(REGION_F, (bits_to_int(prefix[:n]),), bits_to_int(prefix[n:]))

    region = _TAG_REGIONS.get(prefix[:2])
    if region is None:
        return None
    widths = list(_row_fields(profile, region))
    if region == REGION_I:
        widths.append(profile.m)
    out_width = output_width(profile, region)
    widths.append(index_width(out_width))
    if len(prefix) != 2 + sum(widths):
        return None
    values, pos = [], 2
    for w in widths:
        values.append(bits_to_int(prefix[pos:pos + w]))
        pos += w
    index = values.pop()
    if index >= out_width:
        return None
    if region == REGION_I:
        y_i = values.pop()
        return BlockKey(region, tuple(values), y_i * (n + 1) + index)
    return BlockKey(region, tuple(values), index)


def parse_address(profile: ScaleProfile, address: str) -> Optional[tuple[BlockKey, int]]:
    """Split an A-address into (block, position); None when it does not parse."""
    width = profile.y_width
    if len(address) <= width or not is_bitstring(address):
        return None
    key = parse_block_prefix(profile, address[:-width])
    if key is None:
        return None
    return key, bits_to_int(address[-width:])
