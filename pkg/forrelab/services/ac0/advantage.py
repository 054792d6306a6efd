"""
Distinguishing advantage of a circuit between two input distributions, and
the hybrid chain between two patterns.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from forrelab.core.errors import DomainRangeError, ShapeMismatchError
from forrelab.core.randomness import SeedLike, make_rng
from forrelab.core.stats import DifferenceEstimate, ProportionEstimate
from forrelab.services.forrelation.samplers import SamplerKind
from .circuit import Ac0Circuit
from .rows import PatternedRows, RowDistribution

logger = logging.getLogger(__name__)


def _check_arity(circuit: Ac0Circuit, *dists: RowDistribution):
    for dist in dists:
        if dist.width != circuit.num_inputs:
            raise ShapeMismatchError(
                f"distribution width {dist.width} != circuit arity {circuit.num_inputs}"
            )


def acceptance_frequency(
    circuit: Ac0Circuit,
    dist: RowDistribution,
    trials: int,
    rng: np.random.Generator,
    batch_size: int = 4096,
) -> int:
    """Number of accepting runs among ``trials`` inputs drawn from ``dist``."""
    hits = 0
    for start in range(0, trials, batch_size):
        count = min(batch_size, trials - start)
        hits += int(circuit.evaluate_batch(dist.sample(rng, count)).sum())
    return hits


def distinguishing_advantage(
    circuit: Ac0Circuit,
    dist_a: RowDistribution,
    dist_b: RowDistribution,
    trials: int,
    seed: SeedLike,
) -> DifferenceEstimate:
    """
    Estimate Pr_a[C = 1] - Pr_b[C = 1].

    Args:
        circuit (Ac0Circuit): the distinguisher
        dist_a, dist_b (RowDistribution): input distributions of the
            circuit's arity
        trials (int): samples per side
        seed: randomness

    Returns:
        DifferenceEstimate: signed estimate with Newcombe 95% interval
    """
    _check_arity(circuit, dist_a, dist_b)
    if trials < 1:
        raise DomainRangeError(f"trials must be >= 1, got {trials}")
    rng = make_rng(seed)
    hits_a = acceptance_frequency(circuit, dist_a, trials, rng)
    hits_b = acceptance_frequency(circuit, dist_b, trials, rng)
    result = DifferenceEstimate.from_counts(hits_a, trials, hits_b, trials)
    logger.info(
        f"Distinguishing advantage {result.estimate:+.4f} "
        f"[{result.ci_low:+.4f}, {result.ci_high:+.4f}] over {trials} trials per side"
    )
    return result


def acceptance_probability_exact(circuit: Ac0Circuit, dist: RowDistribution) -> float:
    """Pr_{x ~ dist}[C(x) = 1] by enumerating the support of ``dist``."""
    _check_arity(circuit, dist)
    rows, probs = dist.support()
    return float(np.dot(probs, circuit.evaluate_batch(rows)))


def distinguishing_advantage_exact(
    circuit: Ac0Circuit, dist_a: RowDistribution, dist_b: RowDistribution
) -> float:
    return acceptance_probability_exact(circuit, dist_a) - acceptance_probability_exact(
        circuit, dist_b
    )


@dataclass(frozen=True)
class HybridChain:
    """
    Acceptance of each hybrid H_0 .. H_m and the consecutive gaps.

    The gaps telescope: sum(gaps) == acceptance[0] - acceptance[-1].
    """
    patterns: tuple[str, ...]
    acceptance: tuple[ProportionEstimate, ...]
    gaps: tuple[float, ...]
    total: float

    @property
    def max_gap(self) -> float:
        return max((abs(g) for g in self.gaps), default=0.0)


def pattern_hybrids(z_from: str, z_to: str) -> list[str]:
    """Patterns that switch the differing positions of z_from to z_to one at a time."""
    if len(z_from) != len(z_to):
        raise ShapeMismatchError("hybrid endpoints must have the same length")
    current = list(z_from)
    chain = [z_from]
    for i, (a, b) in enumerate(zip(z_from, z_to)):
        if a != b:
            current[i] = b
            chain.append("".join(current))
    return chain


def hybrid_chain_advantages(
    circuit: Ac0Circuit,
    z_from: str,
    z_to: str,
    ell: int,
    trials: int,
    seed: SeedLike,
    sampler: SamplerKind = SamplerKind.EXACT,
    eps: Optional[float] = None,
    hybrids: Optional[Sequence[RowDistribution]] = None,
) -> HybridChain:
    """
    Walk from P_{z_from,L} to P_{z_to,L} one block at a time and measure the
    circuit's acceptance on every hybrid.

    Each step changes a single block between uniform and Forrelated, so each
    gap is bounded by the single-block advantage and the end-to-end gap is
    at most their sum.
    """
    patterns = pattern_hybrids(z_from, z_to)
    if hybrids is None:
        hybrids = [PatternedRows(z, ell, sampler, eps) for z in patterns]
    _check_arity(circuit, *hybrids)
    rng = make_rng(seed)
    acceptance = tuple(
        ProportionEstimate.from_counts(acceptance_frequency(circuit, h, trials, rng), trials)
        for h in hybrids
    )
    gaps = tuple(
        acceptance[i].estimate - acceptance[i + 1].estimate for i in range(len(acceptance) - 1)
    )
    return HybridChain(
        patterns=tuple(patterns),
        acceptance=acceptance,
        gaps=gaps,
        total=acceptance[0].estimate - acceptance[-1].estimate,
    )
