"""
Turning an inverter into a public-key distinguisher.

Given pk, the distinguisher picks a uniform x, computes y = Eval(pk, x), asks
the inverter for a preimage and outputs 1 iff Eval(pk, x') = y. An inverter
that works on Gen keys therefore tells Gen keys apart from uniform ones,
whose images are sparse.
"""
import logging
from typing import Optional, Protocol

import numpy as np

from forrelab.core.bits import int_to_bits, is_bitstring
from forrelab.services.oracle_world.handle import OracleHandle
from .trapdoor import towf_eval

logger = logging.getLogger(__name__)


class Inverter(Protocol):
    def __call__(
        self, handle: OracleHandle, pk: str, y: str, rng: np.random.Generator
    ) -> Optional[str]:
        ...


def trivial_inverter(handle: OracleHandle, pk: str, y: str, rng: np.random.Generator) -> Optional[str]:
    """Always answers 0^n."""
    return "0" * handle.profile.n


def random_guess_inverter(handle: OracleHandle, pk: str, y: str, rng: np.random.Generator) -> Optional[str]:
    n = handle.profile.n
    return int_to_bits(int(rng.integers(0, 1 << n)), n)


class FakePkDistinguisher:
    """
    Distinguisher for pk pseudorandomness built from ``inverter``.

    Makes exactly one inverter call per decision; ``inverter_calls`` counts them.
    """

    def __init__(self, inverter: Inverter):
        self.inverter = inverter
        self.inverter_calls = 0

    def __call__(self, handle: OracleHandle, pk: str, rng: np.random.Generator) -> int:
        n = handle.profile.n
        x = int_to_bits(int(rng.integers(0, 1 << n)), n)
        y = towf_eval(handle, pk, x)
        self.inverter_calls += 1
        guess = self.inverter(handle, pk, y, rng)
        if guess is None or len(guess) != n or not is_bitstring(guess):
            return 0
        return int(towf_eval(handle, pk, guess) == y)


def fake_pk_adversary_wrap(inverter: Inverter) -> FakePkDistinguisher:
    return FakePkDistinguisher(inverter)
