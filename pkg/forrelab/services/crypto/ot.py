"""
Semi-honest 1-out-of-2 oblivious transfer from pseudorandom public keys.

    receiver(y):   (pk_y, td_y) <- Gen, pk_{1-y} uniform;   sends pk_0 ‖ pk_1
    sender(x0,x1): c_b = Enc(pk_b, x_b);                      sends c_0 ‖ c_1
    receiver:      z = Dec(td_y, c_y)

Each party's next message is a function of its input, its seed and the
messages so far; the only other randomness is the decoder's.
"""
import logging
from dataclasses import dataclass

from forrelab.core.bits import int_to_bits
from forrelab.core.errors import DomainRangeError
from forrelab.core.randomness import SeedLike, draw_seed, make_rng
from forrelab.services.oracle_world.handle import OracleHandle
from .pke import Ciphertext, pke_dec, pke_enc, pke_error_budget
from .transcript import Transcript
from .trapdoor import towf_gen

logger = logging.getLogger(__name__)


@dataclass
class OtTranscript:
    y: int
    receiver_seed: int
    x0: int
    x1: int
    sender_seed: int
    transcript: Transcript
    z: int
    error_budget: float

    @property
    def correct(self) -> bool:
        return self.z == (self.x1 if self.y else self.x0)

    def sender_view(self) -> dict:
        """Everything the sender sees: its inputs, its seed and the receiver's keys."""
        pk0, pk1 = self.public_keys()
        return {"x0": self.x0, "x1": self.x1, "sender_seed": self.sender_seed, "pk0": pk0, "pk1": pk1}

    def public_keys(self) -> tuple[str, str]:
        (first,) = self.transcript.by_role("receiver")
        half = len(first.bits) // 2
        return first.bits[:half], first.bits[half:]


def _check_bit(value: int, name: str):
    if value not in (0, 1):
        raise DomainRangeError(f"{name} must be a bit, got {value}")


def receiver_first_message(handle: OracleHandle, y: int, seed: SeedLike) -> tuple[str, str]:
    """
    Returns:
        tuple[str, str]: (pk_0 ‖ pk_1, td_y)
    """
    _check_bit(y, "y")
    rng = make_rng(seed)
    keys = towf_gen(handle, rng)
    fake = int_to_bits(int(rng.integers(0, 1 << handle.profile.lam)), handle.profile.lam)
    pks = (keys.pk, fake) if y == 0 else (fake, keys.pk)
    return pks[0] + pks[1], keys.td


def sender_message(handle: OracleHandle, x0: int, x1: int, first_message: str, seed: SeedLike) -> str:
    _check_bit(x0, "x0")
    _check_bit(x1, "x1")
    rng = make_rng(seed)
    half = len(first_message) // 2
    c0 = pke_enc(handle, first_message[:half], x0, rng)
    c1 = pke_enc(handle, first_message[half:], x1, rng)
    return c0.to_bits() + c1.to_bits()


def receiver_output(handle: OracleHandle, y: int, td: str, second_message: str) -> int:
    profile = handle.profile
    half = len(second_message) // 2
    chosen = second_message[half:] if y else second_message[:half]
    return pke_dec(handle, td, Ciphertext.from_bits(chosen, profile.m, profile.n))


def ot_run(handle: OracleHandle, x0: int, x1: int, y: int, seed: SeedLike) -> OtTranscript:
    """
    Run the protocol once.

    Args:
        handle (OracleHandle): access to a trapdoor world
        x0 (int): sender's first bit
        x1 (int): sender's second bit
        y (int): receiver's choice
        seed: root of both parties' seeds

    Returns:
        OtTranscript: inputs, seeds, messages and the receiver's output
    """
    rng = make_rng(seed)
    receiver_seed, sender_seed = draw_seed(rng), draw_seed(rng)
    transcript = Transcript()
    first, td = receiver_first_message(handle, y, receiver_seed)
    transcript.add("receiver", "pks", first)
    second = sender_message(handle, x0, x1, first, sender_seed)
    transcript.add("sender", "cts", second)
    z = receiver_output(handle, y, td, second)
    result = OtTranscript(
        y=y,
        receiver_seed=receiver_seed,
        x0=x0,
        x1=x1,
        sender_seed=sender_seed,
        transcript=transcript,
        z=z,
        error_budget=pke_error_budget(handle.profile, handle.repetitions),
    )
    if not result.correct:
        logger.warning(f"OT output {z} differs from x_{y} (decode error)")
    return result
