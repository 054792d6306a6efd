"""
PRF and injective one-way function over a PRF world.

G(k, x) decodes block (k, x) of A; the one-way function concatenates
G(k, i) over 3n fixed inputs.
"""
import logging
from typing import Optional

from forrelab.core.bits import int_to_bits, is_bitstring
from forrelab.core.config.settings import settings
from forrelab.core.errors import DomainRangeError, ShapeMismatchError
from forrelab.services.oracle_world.handle import OracleHandle
from forrelab.services.oracle_world.profile import ScaleProfile, WorldKind
from .budget import repetitions_for, union_budget

logger = logging.getLogger(__name__)


def _check_key(handle: OracleHandle, value: str, what: str):
    n = handle.profile.n
    if len(value) != n or not is_bitstring(value):
        raise ShapeMismatchError(f"{what} must be {n} bits, got {value!r}")


def prf_eval(handle: OracleHandle, k: str, x: str, repetitions: Optional[int] = None) -> int:
    """
    Evaluate the keyed function at (k, x) by decoding one block.

    Args:
        handle (OracleHandle): access to a PRF world
        k (str): n-bit key
        x (str): n-bit input
        repetitions (int | None): decoder repetitions, handle default if None

    Returns:
        int: f_k(x) up to decode error
    """
    if handle.profile.kind is not WorldKind.PRF:
        raise ShapeMismatchError("prf_eval needs a PRF world")
    _check_key(handle, k, "k")
    _check_key(handle, x, "x")
    return handle.decode(k + x, repetitions)


def owf_inputs(n: int, relaxed_indexing: bool = False) -> list[int]:
    """
    The 3n inputs 1 .. 3n fed to f_k.

    Raises:
        DomainRangeError: when 3n >= 2^n (n < 4) and indexing is not relaxed
    """
    size = 1 << n
    if 3 * n >= size and not relaxed_indexing:
        raise DomainRangeError(
            f"inputs 1..{3 * n} do not fit in {n} bits; use n >= 4 or relaxed indexing"
        )
    return [i % size for i in range(1, 3 * n + 1)]


def owf_repetitions(profile: ScaleProfile, floor: Optional[int] = None) -> int:
    n = profile.n
    return repetitions_for(3 * n, n, settings.decode_repetitions if floor is None else floor)


def owf_eval(
    handle: OracleHandle,
    k: str,
    relaxed_indexing: bool = False,
    repetitions: Optional[int] = None,
) -> str:
    """
    g(k) = f_k(1) ‖ ... ‖ f_k(3n), amplified so the whole output is correct
    with probability at least 1 - 2^-n.

    ``relaxed_indexing`` reduces the inputs mod 2^n, which lets desk profiles
    with n < 4 run; g is then never injective on its own.
    """
    n = handle.profile.n
    _check_key(handle, k, "k")
    reps = owf_repetitions(handle.profile, handle.repetitions) if repetitions is None else repetitions
    out = "".join(
        str(prf_eval(handle, k, int_to_bits(x, n), reps))
        for x in owf_inputs(n, relaxed_indexing)
    )
    logger.debug(f"owf({k}) = {out} with {reps} repetitions per bit")
    return out


def owf_error_budget(profile: ScaleProfile, repetitions: Optional[int] = None) -> float:
    return union_budget(3 * profile.n, owf_repetitions(profile, repetitions))
