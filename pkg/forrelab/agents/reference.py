"""
Ground-truth inverters.

These read the world's plaintext and exist to calibrate the games: an
honest harness never hands them to untrusted code. Both look up a trapdoor
for pk in the plaintext G, so on a pk outside G's image they give up.
"""
from typing import Optional

import numpy as np

from forrelab.core.bits import bits_to_int, int_to_bits
from forrelab.services.crypto.trapdoor import towf_inv
from forrelab.services.oracle_world.handle import OracleHandle
from forrelab.services.oracle_world.world import TrapdoorOracleWorld


class _TrapdoorLookup:
    def __init__(self, world: TrapdoorOracleWorld):
        self.world = world

    def trapdoor_for(self, pk: str) -> Optional[int]:
        matches = np.flatnonzero(self.world.G == bits_to_int(pk))
        return int(matches[0]) if matches.size else None


class PlaintextPeekingInverter(_TrapdoorLookup):
    """Answers I(td, y) straight from the plaintext tables."""

    def __call__(self, handle: OracleHandle, pk: str, y: str, rng: np.random.Generator) -> Optional[str]:
        td = self.trapdoor_for(pk)
        if td is None:
            return None
        x = self.world.inv(td, bits_to_int(y))
        return None if x is None else int_to_bits(x, self.world.n)


class TrapdoorHoldingInverter(_TrapdoorLookup):
    """Knows the trapdoor and inverts honestly through the decoder."""

    def __call__(self, handle: OracleHandle, pk: str, y: str, rng: np.random.Generator) -> Optional[str]:
        td = self.trapdoor_for(pk)
        if td is None:
            return None
        return towf_inv(handle, int_to_bits(td, self.world.n), y)
