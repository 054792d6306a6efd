"""
Public-key encryption from the trapdoor function's hardcore bit, and the
key exchange built on it.

    Enc(pk, b) = (Eval(pk, x), r, <x, r> xor b)     x, r uniform n-bit
    Dec(td, (y, r, c)) = <Inv(td, y), r> xor c

An undefined inverse decrypts as x = 0, whose hardcore bit is 0.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

from forrelab.core.bits import bits_to_int, inner_product, int_to_bits
from forrelab.core.errors import DomainRangeError, ShapeMismatchError
from forrelab.core.randomness import SeedLike, derive_seeds, make_rng
from forrelab.services.oracle_world.handle import OracleHandle
from forrelab.services.oracle_world.profile import ScaleProfile
from .trapdoor import (
    TrapdoorKeys,
    eval_error_budget,
    gen_error_budget,
    inv_error_budget,
    towf_eval,
    towf_gen,
    towf_inv,
)
from .transcript import Transcript

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Ciphertext:
    y: str
    r: str
    c: int

    def to_bits(self) -> str:
        return self.y + self.r + str(self.c)

    @classmethod
    def from_bits(cls, bits: str, m: int, n: int) -> "Ciphertext":
        if len(bits) != m + n + 1:
            raise ShapeMismatchError(f"ciphertext must be {m + n + 1} bits, got {len(bits)}")
        return cls(y=bits[:m], r=bits[m:m + n], c=int(bits[-1]))


def pke_gen(handle: OracleHandle, seed: SeedLike) -> TrapdoorKeys:
    """Key generation is the trapdoor function's Gen; sk is the trapdoor."""
    return towf_gen(handle, seed)


def pke_enc(handle: OracleHandle, pk: str, b: int, seed: SeedLike) -> Ciphertext:
    """
    Encrypt one bit.

    Args:
        handle (OracleHandle): access to a trapdoor world
        pk (str): 3n-bit public key
        b (int): plaintext bit
        seed: encryption randomness (x and r)

    Returns:
        Ciphertext: (y, r, c)
    """
    if b not in (0, 1):
        raise DomainRangeError(f"plaintext must be a bit, got {b}")
    n = handle.profile.n
    rng = make_rng(seed)
    x = int(rng.integers(0, 1 << n))
    r = int(rng.integers(0, 1 << n))
    y = towf_eval(handle, pk, int_to_bits(x, n))
    return Ciphertext(y=y, r=int_to_bits(r, n), c=inner_product(x, r) ^ b)


def pke_dec(handle: OracleHandle, sk: str, ct: Ciphertext) -> int:
    x = towf_inv(handle, sk, ct.y)
    x_value = 0 if x is None else bits_to_int(x)
    return inner_product(x_value, bits_to_int(ct.r)) ^ ct.c


def pke_error_budget(profile: ScaleProfile, repetitions: Optional[int] = None) -> float:
    """Gen, Eval and Inv bounds added together."""
    return min(
        1.0,
        gen_error_budget(profile, repetitions)
        + eval_error_budget(profile, repetitions)
        + inv_error_budget(profile, repetitions),
    )


@dataclass
class KeyExchangeResult:
    alice_key: str
    bob_key: str
    transcript: Transcript
    error_budget: float
    ciphertexts: list[Ciphertext] = field(default_factory=list)

    @property
    def agreed(self) -> bool:
        return self.alice_key == self.bob_key


def key_exchange(handle: OracleHandle, seed: SeedLike) -> KeyExchangeResult:
    """
    Alice publishes pk; Bob encrypts n random bits under it; Alice decrypts.

    The transcript holds only pk and the n ciphertexts.
    """
    n = handle.profile.n
    alice_seed, bob_seed = derive_seeds(seed, 2)
    keys = pke_gen(handle, alice_seed)
    transcript = Transcript()
    transcript.add("alice", "pk", keys.pk)

    bob_rng = make_rng(bob_seed)
    bob_bits = [int(b) for b in bob_rng.integers(0, 2, size=n)]
    ciphertexts = []
    for i, bit in enumerate(bob_bits):
        ct = pke_enc(handle, keys.pk, bit, bob_rng)
        ciphertexts.append(ct)
        transcript.add("bob", f"ct{i}", ct.to_bits())

    alice_bits = [pke_dec(handle, keys.td, ct) for ct in ciphertexts]
    profile, reps = handle.profile, handle.repetitions
    budget = min(
        1.0,
        gen_error_budget(profile, reps)
        + n * (eval_error_budget(profile, reps) + inv_error_budget(profile, reps)),
    )
    result = KeyExchangeResult(
        alice_key="".join(map(str, alice_bits)),
        bob_key="".join(map(str, bob_bits)),
        transcript=transcript,
        error_budget=budget,
        ciphertexts=ciphertexts,
    )
    if not result.agreed:
        logger.warning(f"Key exchange disagreement: alice={result.alice_key} bob={result.bob_key}")
    return result
