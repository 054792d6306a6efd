"""
Adversary interface.

An adversary gets an OracleHandle (A, B and the decoder, all counted against
its cap), the challenge bit string and a private generator, and outputs a bit.
It never sees a world object.
"""
from typing import Protocol

import numpy as np

from forrelab.services.oracle_world.handle import OracleHandle


class Adversary(Protocol):
    def __call__(self, handle: OracleHandle, challenge: str, rng: np.random.Generator) -> int:
        ...
