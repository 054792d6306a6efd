"""
Oracle worlds: scale profiles, the encoded oracle A, the NP oracle B,
query-counting handles and snapshots.
"""

from .profile import PRESETS, ScaleProfile, WorldKind, load_profile
from .addressing import (
    REGION_F,
    REGION_G,
    REGION_I,
    REGION_PK_MAP,
    BlockKey,
    address_of,
    block_prefix,
    output_width,
    parse_address,
    parse_block_prefix,
    row_length,
)
from .world import (
    OracleWorld,
    PrfOracleWorld,
    TrapdoorOracleWorld,
    decode_bit,
    output_bits,
    plant_image,
    plant_public_key,
    resample_block,
    sample_prf_world,
    sample_trapdoor_world,
    sample_world,
    differing_blocks,
)
from .oracle_b import (
    NpOracleB,
    encode_query,
    decode_query,
    find_witness,
    query_b,
    reference_query_b,
)
from .handle import OracleHandle, QueryCounts
from .snapshot import load_world, save_world, world_digest

__all__ = [
    "PRESETS",
    "ScaleProfile",
    "WorldKind",
    "load_profile",
    "REGION_F",
    "REGION_G",
    "REGION_I",
    "REGION_PK_MAP",
    "BlockKey",
    "address_of",
    "block_prefix",
    "output_width",
    "parse_address",
    "parse_block_prefix",
    "row_length",
    "OracleWorld",
    "PrfOracleWorld",
    "TrapdoorOracleWorld",
    "decode_bit",
    "output_bits",
    "plant_image",
    "plant_public_key",
    "resample_block",
    "sample_prf_world",
    "sample_trapdoor_world",
    "sample_world",
    "differing_blocks",
    "NpOracleB",
    "encode_query",
    "decode_query",
    "find_witness",
    "query_b",
    "reference_query_b",
    "OracleHandle",
    "QueryCounts",
    "load_world",
    "save_world",
    "world_digest",
]
