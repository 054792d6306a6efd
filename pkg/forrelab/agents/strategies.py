"""
Built-in adversaries: baselines and harness sanity checks.
"""
import logging

import numpy as np

from forrelab.core.bits import int_to_bits
from forrelab.services.oracle_world.handle import OracleHandle
from forrelab.services.oracle_world.oracle_b import encode_query
from forrelab.services.oracle_world.profile import WorldKind

logger = logging.getLogger(__name__)


class ConstantAdversary:
    def __init__(self, bit: int = 0):
        self.bit = bit

    def __call__(self, handle: OracleHandle, challenge: str, rng: np.random.Generator) -> int:
        return self.bit


class RandomBitAdversary:
    def __call__(self, handle: OracleHandle, challenge: str, rng: np.random.Generator) -> int:
        return int(rng.integers(0, 2))


class ReadBitAdversary:
    """Outputs one fixed bit of A (0 for addresses outside the world)."""

    def __init__(self, address: str):
        self.address = address

    def __call__(self, handle: OracleHandle, challenge: str, rng: np.random.Generator) -> int:
        return handle.read_a(self.address)


class FirstBitAdversary:
    """Outputs 1 iff the challenge's first bit is 0."""

    def __call__(self, handle: OracleHandle, challenge: str, rng: np.random.Generator) -> int:
        return int(challenge[:1] == "0")


class BOnlyAdversary:
    """
    Asks B whether a two-bit witness satisfies w0 AND w1, a question with no
    oracle gates, and outputs the answer.
    """
    QUERY = "WITNESS 2\ng AND w0 w1\nOUTPUT g"

    def __call__(self, handle: OracleHandle, challenge: str, rng: np.random.Generator) -> int:
        return handle.query_b(encode_query(self.QUERY))


class DecodeAndCompareAdversary:
    """
    Decodes rows of A key by key and outputs 1 iff some row equals the
    challenge table. Stops a row at its first mismatching bit.

    Needs up to 2^(2n) decodes, so it only fits the query cap at small n.
    """

    def __call__(self, handle: OracleHandle, challenge: str, rng: np.random.Generator) -> int:
        profile = handle.profile
        if profile.kind is not WorldKind.PRF:
            return 0
        n = profile.n
        for k in range(1 << n):
            key = int_to_bits(k, n)
            for x in range(1 << n):
                if handle.decode(key + int_to_bits(x, n)) != int(challenge[x]):
                    break
            else:
                logger.debug(f"Challenge matches row k={key}")
                return 1
        return 0
