"""
Ready-made circuits: baselines for sensitivity tests, random circuits for
fuzzing and a Forrelation sign proxy for distinguishing experiments.
"""
import itertools

import numpy as np

from forrelab.core.errors import DomainRangeError
from .circuit import Ac0Circuit, CircuitBuilder


def or_all(n: int) -> Ac0Circuit:
    b = CircuitBuilder(n)
    return b.build(b.OR(*range(n)))


def and_all(n: int) -> Ac0Circuit:
    b = CircuitBuilder(n)
    return b.build(b.AND(*range(n)))


def single_bit(n: int, index: int) -> Ac0Circuit:
    """Output input ``index`` unchanged (a depth-0 circuit)."""
    if not 0 <= index < n:
        raise DomainRangeError(f"index {index} outside {n} inputs")
    return Ac0Circuit(n, (), index)


def constant(n: int, value: int) -> Ac0Circuit:
    b = CircuitBuilder(n)
    return b.build(b.const(value))


def parity_dnf(n: int) -> Ac0Circuit:
    """
    PARITY_n as a depth-2 DNF: one AND term per odd-weight input pattern.
    """
    if n < 1:
        raise DomainRangeError("parity needs at least one input")
    b = CircuitBuilder(n)
    negated = [b.NOT(i) for i in range(n)]
    terms = []
    for pattern in itertools.product((0, 1), repeat=n):
        if sum(pattern) % 2 == 1:
            terms.append(b.AND(*(i if bit else negated[i] for i, bit in enumerate(pattern))))
    return b.build(b.OR(*terms))


def _threshold(b: CircuitBuilder, literals: list[int], t: int) -> int:
    """OR over all t-subsets of AND(literals in subset)."""
    if t <= 0:
        return b.const(1)
    if t > len(literals):
        return b.const(0)
    terms = [b.AND(*subset) for subset in itertools.combinations(literals, t)]
    return b.OR(*terms)


def threshold_dnf(n: int, t: int) -> Ac0Circuit:
    """1 iff at least ``t`` of the n inputs are 1."""
    b = CircuitBuilder(n)
    return b.build(_threshold(b, list(range(n)), t))


def random_circuit(
    num_inputs: int,
    size: int,
    depth: int,
    rng: np.random.Generator,
    max_fanin: int = 4,
) -> Ac0Circuit:
    """
    Layered random circuit with alternating AND/OR layers.

    Each gate reads between 1 and ``max_fanin`` nodes drawn from the previous
    layer and from random input literals; the last layer is a single gate.

    Args:
        num_inputs (int): arity, >= 1
        size (int): number of AND/OR gates, >= depth
        depth (int): number of layers, >= 1
        rng (np.random.Generator): randomness
        max_fanin (int): largest fan-in per gate
    """
    if num_inputs < 1 or depth < 1 or size < depth:
        raise DomainRangeError(
            f"need num_inputs >= 1, depth >= 1 and size >= depth "
            f"(got {num_inputs}, {depth}, {size})"
        )
    b = CircuitBuilder(num_inputs)
    negated: dict[int, int] = {}

    def literal() -> int:
        i = int(rng.integers(num_inputs))
        if rng.random() < 0.5:
            return i
        if i not in negated:
            negated[i] = b.NOT(i)
        return negated[i]

    counts = [1] * depth
    if depth == 1:
        counts[0] = size
    else:
        for _ in range(size - depth):
            counts[int(rng.integers(depth - 1))] += 1

    kind_and = bool(rng.integers(2))
    previous: list[int] = []
    for layer, count in enumerate(counts):
        top = layer == depth - 1
        current = []
        for index in range(count):
            if top and index == count - 1:
                # the output gate reads every gate below it
                sources = previous + current + [literal()]
            else:
                sources = []
                for _ in range(int(rng.integers(1, max_fanin + 1))):
                    if previous and rng.random() < 0.7:
                        sources.append(previous[int(rng.integers(len(previous)))])
                    else:
                        sources.append(literal())
            sources = sorted(set(sources))
            current.append(b.AND(*sources) if kind_and else b.OR(*sources))
        kind_and = not kind_and
        previous = current
    return b.build(previous[-1])


def phi_sign_proxy(ell: int) -> Ac0Circuit:
    """
    Agreement test between g(0) and the majority of f over a block f ‖ g.

    The zeroth Walsh-Hadamard coefficient of (-1)^f is negative exactly when
    more than half of f is 1, so exact-forrelated blocks always satisfy
    g(0) == MAJ(f) while uniform blocks do so with probability 1/2. Majority
    is written as a threshold DNF, so this is only practical for ell <= 4.
    """
    if not 0 <= ell <= 4:
        raise DomainRangeError(f"phi_sign_proxy supports ell in [0, 4], got {ell}")
    half = 1 << ell
    b = CircuitBuilder(2 * half)
    f_inputs = list(range(half))
    g0 = half
    majority = _threshold(b, f_inputs, half // 2 + 1)
    f_zeros = [b.NOT(i) for i in f_inputs]
    minority = _threshold(b, f_zeros, half - half // 2)
    not_g0 = b.NOT(g0)
    agree = b.OR(b.AND(g0, majority), b.AND(not_g0, minority))
    return b.build(agree)
