"""
Forrelation decoder: the 2-query test amplified by repetition.

One run of the test circuit accepts (measures |0^ell>) with probability
Phi(f, g)^2. The decoder repeats the run and outputs 1 iff the acceptance
frequency reaches the threshold. Thresholds are calibrated per (ell, sampler)
since uniform instances accept with mean 2^-ell while exact-forrelated ones
accept with mean close to 2/pi.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from tqdm import tqdm

from forrelab.core.errors import DomainRangeError
from forrelab.core.randomness import SeedLike, make_rng
from .samplers import (
    SamplerKind,
    default_eps,
    sample_exact_batch,
    sample_gaussian_batch,
    sample_uniform_batch,
)
from .simulator import forrelation_test_program, run_query_algorithm
from .transform import forrelation_values
from .truth_table import ForrelationInstance

logger = logging.getLogger(__name__)


def acceptance_probability(inst: ForrelationInstance) -> float:
    """Single-run acceptance probability from a full statevector simulation."""
    run = run_query_algorithm(forrelation_test_program(inst.ell), inst.bits)
    return float(run.probabilities()[0])


def quantum_forrelation_test(
    inst: ForrelationInstance,
    repetitions: int,
    threshold: float,
    seed: SeedLike = None,
) -> int:
    """
    Run the forrelation test ``repetitions`` times and threshold the
    acceptance frequency.

    Args:
        inst (ForrelationInstance): block to test
        repetitions (int): independent runs, >= 1
        threshold (float): accept-frequency cut in (0, 1)
        seed: measurement randomness

    Returns:
        int: 1 if the block is judged Forrelated, else 0
    """
    if repetitions < 1:
        raise DomainRangeError(f"repetitions must be >= 1, got {repetitions}")
    if not 0.0 < threshold < 1.0:
        raise DomainRangeError(f"threshold must be in (0, 1), got {threshold}")
    p = min(1.0, max(0.0, acceptance_probability(inst)))
    accepted = int(make_rng(seed).binomial(repetitions, p))
    return int(accepted >= threshold * repetitions)


def decode_error_probability(p: float, repetitions: int, threshold: float, bit: int) -> float:
    """
    Exact probability that the thresholded test mislabels a block whose
    single-run acceptance is ``p`` and whose true pattern bit is ``bit``.
    """
    cut = math.ceil(threshold * repetitions - 1e-12)
    ks = np.arange(repetitions + 1)
    log_pmf = (
        np.array([math.lgamma(repetitions + 1) - math.lgamma(k + 1)
                  - math.lgamma(repetitions - k + 1) for k in ks])
    )
    rest = repetitions - ks
    with np.errstate(divide="ignore", invalid="ignore"):
        log_pmf = log_pmf + np.where(ks > 0, ks * np.log(p), 0.0) + np.where(rest > 0, rest * np.log1p(-p), 0.0)
    pmf = np.exp(log_pmf)
    accept = float(pmf[cut:].sum())
    return 1.0 - accept if bit else accept


def amplified_repetitions(
    target_error: float, margin: float, minimum: int = 1
) -> int:
    """
    Repetitions so that a Hoeffding bound with gap ``margin`` between the
    threshold and the true acceptance mean keeps the error under
    ``target_error``.
    """
    if not 0.0 < target_error < 1.0:
        raise DomainRangeError(f"target_error must be in (0, 1), got {target_error}")
    if not 0.0 < margin < 1.0:
        raise DomainRangeError(f"margin must be in (0, 1), got {margin}")
    return max(minimum, math.ceil(math.log(2.0 / target_error) / (2.0 * margin ** 2)))


@dataclass(frozen=True)
class CalibrationResult:
    ell: int
    sampler: SamplerKind
    samples: int
    uniform_mean: float
    uniform_std: float
    forrelated_mean: float
    forrelated_std: float
    threshold: float


def calibrate_threshold(
    ell: int,
    sampler: SamplerKind,
    samples: int,
    seed: SeedLike,
    eps: Optional[float] = None,
    batch_size: int = 1024,
    progress: bool = False,
) -> CalibrationResult:
    """
    Measure single-run acceptance (Phi^2) under uniform and Forrelated
    instances and place the threshold at the midpoint of the two means.
    """
    if samples < 1:
        raise DomainRangeError(f"samples must be >= 1, got {samples}")
    rng = make_rng(seed)
    eps = default_eps(ell) if eps is None else eps
    uniform, forrelated = [], []
    batches = range(0, samples, batch_size)
    for start in tqdm(batches, disable=not progress, desc="calibrate"):
        count = min(batch_size, samples - start)
        f, g = sample_uniform_batch(ell, count, rng)
        uniform.append(forrelation_values(f, g) ** 2)
        if sampler is SamplerKind.GAUSSIAN:
            f, g = sample_gaussian_batch(ell, eps, count, rng)
        else:
            f, g = sample_exact_batch(ell, count, rng)
        forrelated.append(forrelation_values(f, g) ** 2)
    u = np.concatenate(uniform)
    r = np.concatenate(forrelated)
    threshold = float((u.mean() + r.mean()) / 2.0)
    threshold = min(max(threshold, 1e-6), 1.0 - 1e-6)
    logger.info(
        f"Calibrated ell={ell} sampler={sampler.value}: uniform mean "
        f"{u.mean():.5f}, forrelated mean {r.mean():.5f}, threshold {threshold:.5f}"
    )
    return CalibrationResult(
        ell=ell,
        sampler=sampler,
        samples=samples,
        uniform_mean=float(u.mean()),
        uniform_std=float(u.std()),
        forrelated_mean=float(r.mean()),
        forrelated_std=float(r.std()),
        threshold=threshold,
    )
