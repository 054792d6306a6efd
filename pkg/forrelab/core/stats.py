"""
Finite-sample statistics shared by the estimators and the experiment harness.

Proportions get Wilson score intervals; differences of two independent
proportions get Newcombe's hybrid interval built from the two Wilson
intervals. Comparisons to a theoretical bound are labelled at 3 sigma.
"""
import math
from dataclasses import dataclass
from enum import Enum

Z_95 = 1.959963984540054


class Verdict(str, Enum):
    CONSISTENT = "CONSISTENT"
    INCONSISTENT = "INCONSISTENT"


def wilson_interval(successes: int, trials: int, z: float = Z_95) -> tuple[float, float]:
    """
    Wilson score interval for a binomial proportion.

    Args:
        successes (int): number of successes
        trials (int): number of trials, >= 1
        z (float): normal quantile (1.96 for 95%)

    Returns:
        tuple[float, float]: (low, high), clipped to [0, 1]
    """
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = successes / trials
    denom = 1.0 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def newcombe_interval(
    s1: int, n1: int, s2: int, n2: int, z: float = Z_95
) -> tuple[float, float]:
    """Interval for p1 - p2 from two independent binomial samples."""
    p1, p2 = s1 / n1, s2 / n2
    l1, u1 = wilson_interval(s1, n1, z)
    l2, u2 = wilson_interval(s2, n2, z)
    d = p1 - p2
    low = d - math.sqrt((p1 - l1) ** 2 + (u2 - p2) ** 2)
    high = d + math.sqrt((u1 - p1) ** 2 + (p2 - l2) ** 2)
    return max(-1.0, low), min(1.0, high)


def proportion_stderr(p: float, trials: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / trials) if trials else 0.0


def check_upper_bound(estimate: float, stderr: float, bound: float, sigmas: float = 3.0) -> Verdict:
    """CONSISTENT iff estimate <= bound + sigmas * stderr."""
    if estimate <= bound + sigmas * stderr + 1e-12:
        return Verdict.CONSISTENT
    return Verdict.INCONSISTENT


def check_lower_bound(estimate: float, stderr: float, bound: float, sigmas: float = 3.0) -> Verdict:
    """CONSISTENT iff estimate >= bound - sigmas * stderr."""
    if estimate >= bound - sigmas * stderr - 1e-12:
        return Verdict.CONSISTENT
    return Verdict.INCONSISTENT


def check_close(estimate: float, stderr: float, target: float, sigmas: float = 3.0) -> Verdict:
    if abs(estimate - target) <= sigmas * stderr + 1e-12:
        return Verdict.CONSISTENT
    return Verdict.INCONSISTENT


@dataclass(frozen=True)
class ProportionEstimate:
    """A Monte-Carlo proportion with its 95% Wilson interval."""
    successes: int
    trials: int
    estimate: float
    ci_low: float
    ci_high: float

    @classmethod
    def from_counts(cls, successes: int, trials: int) -> "ProportionEstimate":
        low, high = wilson_interval(successes, trials)
        return cls(int(successes), int(trials), successes / trials, low, high)

    @property
    def stderr(self) -> float:
        return proportion_stderr(self.estimate, self.trials)


@dataclass(frozen=True)
class DifferenceEstimate:
    """Pr_a - Pr_b from two independent samples, with Newcombe's interval."""
    a: ProportionEstimate
    b: ProportionEstimate
    estimate: float
    ci_low: float
    ci_high: float

    @classmethod
    def from_counts(cls, s1: int, n1: int, s2: int, n2: int) -> "DifferenceEstimate":
        low, high = newcombe_interval(s1, n1, s2, n2)
        a = ProportionEstimate.from_counts(s1, n1)
        b = ProportionEstimate.from_counts(s2, n2)
        return cls(a, b, a.estimate - b.estimate, low, high)

    @property
    def stderr(self) -> float:
        return math.sqrt(self.a.stderr ** 2 + self.b.stderr ** 2)

    def contains(self, value: float) -> bool:
        return self.ci_low - 1e-12 <= value <= self.ci_high + 1e-12
