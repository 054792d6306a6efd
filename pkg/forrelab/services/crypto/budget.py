"""
Decode-error accounting.

A decoded bit is wrong with probability at most 2 exp(-2 r margin^2) for r
repetitions (Hoeffding around the threshold); composite operations add the
bounds of every bit they decode.
"""
import math
from typing import Optional

from forrelab.core.config.settings import settings
from forrelab.services.forrelation.decoder import amplified_repetitions


def bit_error_bound(repetitions: int, margin: Optional[float] = None) -> float:
    margin = settings.decode_margin if margin is None else margin
    return min(1.0, 2.0 * math.exp(-2.0 * repetitions * margin ** 2))


def union_budget(bits: int, repetitions: int, margin: Optional[float] = None) -> float:
    """Error bound for ``bits`` decoded bits, each with ``repetitions`` runs."""
    return min(1.0, bits * bit_error_bound(repetitions, margin))


def repetitions_for(bits: int, n: int, floor: int) -> int:
    """Repetitions keeping a ``bits``-bit decode correct with probability 1 - 2^-n."""
    target = 2.0 ** -n / max(bits, 1)
    return amplified_repetitions(target, settings.decode_margin, minimum=floor)
