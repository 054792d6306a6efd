"""
Samplers for uniform and Forrelated instances.

Three constructions are provided:
- uniform: f and g independent uniform tables
- Gaussian-forrelated: draw X ~ N(0, eps I) over {0,1}^ell, set
  Y = H X / sqrt(2^ell), truncate both to [-1, 1] and round each coordinate z
  to bit 1 with probability (1 + z) / 2 (X rounds into f, Y into g)
- exact-forrelated: f uniform, g(y) = 1 iff the y-th Walsh-Hadamard
  coefficient of (-1)^f is negative (zero coefficients give 0)

Only two interface properties matter downstream: Forrelated instances are
quantum-distinguishable from uniform ones, and each table on its own looks
uniform.
"""
import logging
import math
from enum import Enum
from typing import Optional

import numpy as np

from forrelab.core.errors import DomainRangeError
from forrelab.core.randomness import SeedLike, make_rng
from .transform import fwht
from .truth_table import ForrelationInstance, Provenance, TruthTable

logger = logging.getLogger(__name__)

MAX_SAMPLER_ELL = 20


class SamplerKind(str, Enum):
    """Which Forrelated construction an oracle world plants."""
    EXACT = "exact"
    GAUSSIAN = "gaussian"


def default_eps(ell: int) -> float:
    """Coupling strength 1 / (24 ln L) with L = 2^(ell+1)."""
    return 1.0 / (24.0 * math.log(2 << ell))


def _check_ell(ell: int, minimum: int = 0):
    if not minimum <= ell <= MAX_SAMPLER_ELL:
        raise DomainRangeError(
            f"ell must be in [{minimum}, {MAX_SAMPLER_ELL}], got {ell}"
        )


def _check_eps(eps: float):
    if not 0.0 < eps <= 1.0:
        raise DomainRangeError(f"eps must be in (0, 1], got {eps}")


def sample_uniform_batch(
    ell: int, count: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """(count, 2^ell) arrays of uniform f bits and g bits."""
    size = 1 << ell
    bits = rng.integers(0, 2, size=(count, 2, size), dtype=np.uint8)
    return bits[:, 0, :], bits[:, 1, :]


def sample_gaussian_batch(
    ell: int, eps: float, count: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """(count, 2^ell) arrays of Gaussian-forrelated f bits and g bits."""
    size = 1 << ell
    x = rng.normal(0.0, math.sqrt(eps), size=(count, size))
    y = fwht(x) / math.sqrt(size)
    z = np.clip(np.concatenate((x, y), axis=1), -1.0, 1.0)
    bits = (rng.random(z.shape) < (1.0 + z) / 2.0).astype(np.uint8)
    return bits[:, :size], bits[:, size:]


def sample_exact_batch(
    ell: int, count: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """(count, 2^ell) arrays of exact-forrelated f bits and g bits."""
    size = 1 << ell
    f_bits = rng.integers(0, 2, size=(count, size), dtype=np.uint8)
    spectrum = fwht(1.0 - 2.0 * f_bits)
    return f_bits, (spectrum < 0).astype(np.uint8)


def sample_uniform_instance(ell: int, seed: SeedLike) -> ForrelationInstance:
    """
    Draw f and g as independent uniform tables over {0,1}^ell.

    Args:
        ell (int): domain exponent, 0 <= ell <= 20
        seed: int seed, SeedSequence or Generator

    Returns:
        ForrelationInstance: provenance UNIFORM
    """
    _check_ell(ell)
    f_bits, g_bits = sample_uniform_batch(ell, 1, make_rng(seed))
    return ForrelationInstance(
        f=TruthTable.from_bits(f_bits[0], ell),
        g=TruthTable.from_bits(g_bits[0], ell),
        provenance=Provenance.UNIFORM,
    )


def sample_gaussian_forrelated(
    ell: int, eps: Optional[float], seed: SeedLike
) -> ForrelationInstance:
    """
    Draw an instance from the Gaussian-rounding Forrelation construction.

    Args:
        ell (int): domain exponent, 1 <= ell <= 20
        eps (float): coupling strength in (0, 1]; None picks 1 / (24 ln L)
        seed: int seed, SeedSequence or Generator

    Returns:
        ForrelationInstance: provenance GAUSSIAN_FORRELATED
    """
    _check_ell(ell, minimum=1)
    eps = default_eps(ell) if eps is None else eps
    _check_eps(eps)
    f_bits, g_bits = sample_gaussian_batch(ell, eps, 1, make_rng(seed))
    return ForrelationInstance(
        f=TruthTable.from_bits(f_bits[0], ell),
        g=TruthTable.from_bits(g_bits[0], ell),
        provenance=Provenance.GAUSSIAN_FORRELATED,
    )


def forrelate_table(f: TruthTable) -> ForrelationInstance:
    """
    Pair ``f`` with the sign pattern of its Walsh-Hadamard spectrum.
    """
    spectrum = fwht(f.signs)
    return ForrelationInstance(
        f=f,
        g=TruthTable.from_bits((spectrum < 0).astype(np.uint8), f.ell),
        provenance=Provenance.EXACT_FORRELATED,
    )


def sample_exact_forrelated(ell: int, seed: SeedLike) -> ForrelationInstance:
    """
    Draw a uniform f and pair it with the signs of its spectrum.

    Args:
        ell (int): domain exponent, 1 <= ell <= 20
        seed: int seed, SeedSequence or Generator

    Returns:
        ForrelationInstance: provenance EXACT_FORRELATED
    """
    _check_ell(ell, minimum=1)
    rng = make_rng(seed)
    f_bits = rng.integers(0, 2, size=1 << ell, dtype=np.uint8)
    return forrelate_table(TruthTable.from_bits(f_bits, ell))


def sample_forrelated(
    ell: int,
    sampler: SamplerKind,
    seed: SeedLike,
    eps: Optional[float] = None,
) -> ForrelationInstance:
    """Dispatch to the Forrelated construction named by ``sampler``."""
    if sampler is SamplerKind.GAUSSIAN:
        return sample_gaussian_forrelated(ell, eps, seed)
    return sample_exact_forrelated(ell, seed)


def sample_patterned_block(
    ell: int,
    pattern_bit: int,
    sampler: SamplerKind,
    seed: SeedLike,
    eps: Optional[float] = None,
) -> ForrelationInstance:
    """One block of a patterned distribution: Forrelated iff pattern_bit."""
    if pattern_bit:
        return sample_forrelated(ell, sampler, seed, eps)
    return sample_uniform_instance(ell, seed)
