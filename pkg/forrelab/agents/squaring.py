"""
Advantage-squaring wrapper.

The wrapper flips a coin c. On c = 1 it picks a key k and computes the table
of f_k itself through the decoder; on c = 0 it draws a uniform table h. It
runs the inner adversary on that table (output d) and on the real challenge,
and outputs c xor d xor (the second output). Per world its advantage is
(a - b)^2, where a and b are the inner adversary's acceptance rates on f_k
and on h.
"""
import numpy as np

from forrelab.core.bits import int_to_bits
from forrelab.services.oracle_world.handle import OracleHandle
from .base import Adversary


class AdvantageSquaringAdversary:
    """Two inner runs per decision; ``inner_runs`` counts them."""

    def __init__(self, inner: Adversary):
        self.inner = inner
        self.inner_runs = 0

    def _table(self, handle: OracleHandle, c: int, rng: np.random.Generator) -> str:
        n = handle.profile.n
        if c == 0:
            return "".join(str(int(b)) for b in rng.integers(0, 2, size=1 << n))
        key = int_to_bits(int(rng.integers(0, 1 << n)), n)
        return handle.decode_string([key + int_to_bits(x, n) for x in range(1 << n)])

    def __call__(self, handle: OracleHandle, challenge: str, rng: np.random.Generator) -> int:
        c = int(rng.integers(0, 2))
        d = self.inner(handle, self._table(handle, c, rng), rng)
        e = self.inner(handle, challenge, rng)
        self.inner_runs += 2
        return c ^ d ^ e


def advantage_squaring_wrap(adversary: Adversary) -> AdvantageSquaringAdversary:
    return AdvantageSquaringAdversary(adversary)
