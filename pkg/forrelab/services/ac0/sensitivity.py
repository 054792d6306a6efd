"""
Pointwise sensitivity s^x(f) and its tail Pr_x[s^x(f) >= t].
"""
import logging

import numpy as np

from forrelab.core.errors import BudgetExceededError, DomainRangeError
from forrelab.core.randomness import SeedLike, make_rng
from forrelab.core.stats import ProportionEstimate
from .circuit import Ac0Circuit, BitsLike, as_input_array
from .rows import all_rows

logger = logging.getLogger(__name__)

MAX_EXACT_INPUTS = 20


def sensitivities(circuit: Ac0Circuit, inputs: np.ndarray) -> np.ndarray:
    """
    Sensitivity at every row of a (batch, n) input array.

    All n single-bit flips of each row are evaluated in one batch.
    """
    inputs = np.atleast_2d(np.asarray(inputs, dtype=np.uint8))
    batch, n = inputs.shape
    base = circuit.evaluate_batch(inputs)
    if n == 0:
        return np.zeros(batch, dtype=np.int64)
    flips = np.repeat(inputs, n, axis=0) ^ np.tile(np.eye(n, dtype=np.uint8), (batch, 1))
    flipped = circuit.evaluate_batch(flips).reshape(batch, n)
    return (flipped != base[:, None]).sum(axis=1)


def sensitivity_at(circuit: Ac0Circuit, x: BitsLike) -> int:
    """
    Number of coordinates i with f(x) != f(x with bit i flipped).

    Args:
        circuit (Ac0Circuit): f
        x: input of length num_inputs

    Returns:
        int: s^x(f)
    """
    values = as_input_array(x, circuit.num_inputs)
    return int(sensitivities(circuit, values.reshape(1, -1))[0])


def sensitivity_tail_estimate(
    circuit: Ac0Circuit,
    t: float,
    trials: int,
    seed: SeedLike,
    batch_size: int = 4096,
) -> ProportionEstimate:
    """
    Monte-Carlo estimate of Pr_{x uniform}[s^x(f) >= t] with a Wilson 95% interval.
    """
    if trials < 1:
        raise DomainRangeError(f"trials must be >= 1, got {trials}")
    rng = make_rng(seed)
    hits = 0
    for start in range(0, trials, batch_size):
        count = min(batch_size, trials - start)
        x = rng.integers(0, 2, size=(count, circuit.num_inputs), dtype=np.uint8)
        hits += int((sensitivities(circuit, x) >= t).sum())
    result = ProportionEstimate.from_counts(hits, trials)
    logger.debug(f"Sensitivity tail t={t}: {result.estimate:.5f} over {trials} trials")
    return result


def sensitivity_distribution_exact(circuit: Ac0Circuit) -> np.ndarray:
    """Exact sensitivity at every input, in lexicographic input order."""
    if circuit.num_inputs > MAX_EXACT_INPUTS:
        raise BudgetExceededError(
            f"exact enumeration supports at most {MAX_EXACT_INPUTS} inputs"
        )
    inputs = all_rows(circuit.num_inputs) if circuit.num_inputs else np.zeros((1, 0), np.uint8)
    out = []
    for start in range(0, len(inputs), 4096):
        out.append(sensitivities(circuit, inputs[start:start + 4096]))
    return np.concatenate(out)


def sensitivity_tail_exact(circuit: Ac0Circuit, t: float) -> float:
    """Pr_{x uniform}[s^x(f) >= t] by full enumeration."""
    return float((sensitivity_distribution_exact(circuit) >= t).mean())
