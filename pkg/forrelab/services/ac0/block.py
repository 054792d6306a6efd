"""
Distributional block sensitivity and the g_w reduction.

An input of K*M bits is viewed as a K x M matrix (row-major). Resampling
picks one row uniformly and replaces it by a fresh draw from the row
distribution D; the flip probability is Pr_y[f(x) != f(y)].

For a pair of matrices (w_0, w_1), g_w(z) = f(w_z) where row i of w_z is row
i of w_{z_i}. Every bit of w_z is one of 0, 1, z_i or NOT z_i, so g_w is a
K-input circuit with the same AND/OR gates as f. For any x,

    K * Pr_y[f(x) != f(y)] = E_{x' ~ D^K, z}[s^z(g_w)],  w_z = x, w_not(z) = x'

which ``eq3_identity_check`` verifies by exhaustive enumeration.
"""
import itertools
import logging
from dataclasses import dataclass

import numpy as np

from forrelab.core.errors import BudgetExceededError, DomainRangeError, ShapeMismatchError
from forrelab.core.randomness import SeedLike, make_rng
from forrelab.core.stats import ProportionEstimate
from .circuit import Ac0Circuit, BitsLike, CircuitBuilder, Gate, as_input_array
from .rows import MAX_SUPPORT, RowDistribution, UniformRows, all_rows
from .sensitivity import sensitivity_at

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlockMatrixShape:
    K: int
    M: int

    def __post_init__(self):
        if self.K < 1 or self.M < 1:
            raise DomainRangeError(f"K and M must be >= 1, got K={self.K}, M={self.M}")

    @property
    def size(self) -> int:
        return self.K * self.M

    def check(self, circuit: Ac0Circuit, dist: RowDistribution | None = None):
        if circuit.num_inputs != self.size:
            raise ShapeMismatchError(
                f"circuit has {circuit.num_inputs} inputs but K*M = {self.size}"
            )
        if dist is not None and dist.width != self.M:
            raise ShapeMismatchError(f"row distribution width {dist.width} != M = {self.M}")


def block_resample_flip_prob(
    circuit: Ac0Circuit,
    shape: BlockMatrixShape,
    dist: RowDistribution,
    x: BitsLike,
    trials: int,
    seed: SeedLike,
    batch_size: int = 4096,
) -> ProportionEstimate:
    """
    Estimate Pr_y[f(x) != f(y)] where y resamples one uniformly chosen row
    of x from ``dist``.

    Args:
        circuit (Ac0Circuit): f over K*M inputs
        shape (BlockMatrixShape): K rows of M bits
        dist (RowDistribution): row distribution D over {0,1}^M
        x: the K*M-bit input
        trials (int): number of resamples
        seed: randomness

    Returns:
        ProportionEstimate: flip frequency with Wilson interval
    """
    shape.check(circuit, dist)
    if trials < 1:
        raise DomainRangeError(f"trials must be >= 1, got {trials}")
    base_x = as_input_array(x, shape.size)
    fx = circuit.evaluate_batch(base_x.reshape(1, -1))[0]
    rng = make_rng(seed)
    flips = 0
    for start in range(0, trials, batch_size):
        count = min(batch_size, trials - start)
        rows = rng.integers(shape.K, size=count)
        fresh = dist.sample(rng, count)
        y = np.tile(base_x, (count, 1)).reshape(count, shape.K, shape.M)
        y[np.arange(count), rows] = fresh
        flips += int((circuit.evaluate_batch(y.reshape(count, -1)) != fx).sum())
    return ProportionEstimate.from_counts(flips, trials)


def block_resample_flip_prob_exact(
    circuit: Ac0Circuit,
    shape: BlockMatrixShape,
    dist: RowDistribution,
    x: BitsLike,
) -> float:
    """Exact flip probability, averaging over every row and D's support."""
    shape.check(circuit, dist)
    base_x = as_input_array(x, shape.size)
    fx = circuit.evaluate_batch(base_x.reshape(1, -1))[0]
    support, probs = dist.support()
    total = 0.0
    for k in range(shape.K):
        y = np.tile(base_x, (len(support), 1)).reshape(len(support), shape.K, shape.M)
        y[:, k] = support
        changed = circuit.evaluate_batch(y.reshape(len(support), -1)) != fx
        total += float(np.dot(probs, changed))
    return total / shape.K


def _matrix_support(shape: BlockMatrixShape, dist: RowDistribution, max_support: int):
    rows, probs = dist.support(max_support)
    if len(rows) ** shape.K > max_support:
        raise BudgetExceededError(
            f"D^K support {len(rows)}^{shape.K} exceeds {max_support}"
        )
    for combo in itertools.product(range(len(rows)), repeat=shape.K):
        yield rows[list(combo)].reshape(-1), float(np.prod(probs[list(combo)]))


def expected_block_flip_prob(
    circuit: Ac0Circuit,
    shape: BlockMatrixShape,
    dist: RowDistribution,
    max_support: int = MAX_SUPPORT,
) -> float:
    """E_{x ~ D^K} Pr_y[f(x) != f(y)], exactly."""
    shape.check(circuit, dist)
    return sum(
        p * block_resample_flip_prob_exact(circuit, shape, dist, x)
        for x, p in _matrix_support(shape, dist, max_support)
    )


def _flat(w: BitsLike):
    return w if isinstance(w, str) else np.asarray(w).reshape(-1)


def gw_reduction(
    circuit: Ac0Circuit,
    shape: BlockMatrixShape,
    w0: BitsLike,
    w1: BitsLike,
) -> Ac0Circuit:
    """
    Build g_w: the K-input circuit z -> f(w_z).

    Input (i, j) of f becomes the constant w0[i,j] when w0[i,j] == w1[i,j],
    z_i when (w0, w1) = (0, 1) and NOT z_i when (w0, w1) = (1, 0). The
    AND/OR gates of f are kept as they are, so size and depth never grow.

    Args:
        circuit (Ac0Circuit): f over K*M inputs
        shape (BlockMatrixShape): the matrix view
        w0, w1: K*M-bit matrices (row-major)

    Returns:
        Ac0Circuit: g_w over K inputs
    """
    shape.check(circuit)
    a = as_input_array(_flat(w0), shape.size)
    b = as_input_array(_flat(w1), shape.size)
    builder = CircuitBuilder(shape.K)
    negated: dict[int, int] = {}
    remap = {}
    for pos in range(shape.size):
        row = pos // shape.M
        if a[pos] == b[pos]:
            remap[pos] = builder.const(int(a[pos]))
        elif b[pos]:
            remap[pos] = row
        else:
            if row not in negated:
                negated[row] = builder.NOT(row)
            remap[pos] = negated[row]

    offset = len(builder.gates) + shape.K
    for j in range(len(circuit.gates)):
        remap[circuit.num_inputs + j] = offset + j
    for gate in circuit.gates:
        builder.gates.append(Gate(gate.kind, tuple(remap[s] for s in gate.fanin), gate.value))
    return builder.build(remap[circuit.output])


def compose_wz(shape: BlockMatrixShape, x: np.ndarray, x_prime: np.ndarray, z: np.ndarray):
    """(w0, w1) with w_z = x and w_not(z) = x'."""
    x = x.reshape(shape.K, shape.M)
    x_prime = x_prime.reshape(shape.K, shape.M)
    z = z.reshape(shape.K, 1).astype(bool)
    w1 = np.where(z, x, x_prime)
    w0 = np.where(z, x_prime, x)
    return w0.reshape(-1), w1.reshape(-1)


@dataclass(frozen=True)
class Eq3Result:
    passed: bool
    inputs_checked: int
    max_abs_error: float


def eq3_identity_check(
    circuit: Ac0Circuit,
    shape: BlockMatrixShape,
    dist: RowDistribution | None = None,
    tolerance: float = 1e-9,
) -> Eq3Result:
    """
    Check K * Pr_y[f(x) != f(y)] == E_{x', z}[s^z(g_w)] for every x in
    {0,1}^(K*M), enumerating x' over D^K and z over {0,1}^K.
    """
    dist = dist or UniformRows(shape.M)
    shape.check(circuit, dist)
    if shape.size > 16:
        raise BudgetExceededError(f"exhaustive check needs K*M <= 16, got {shape.size}")
    zs = all_rows(shape.K)
    primes = list(_matrix_support(shape, dist, MAX_SUPPORT))
    worst = 0.0
    inputs = all_rows(shape.size)
    for x in inputs:
        lhs = shape.K * block_resample_flip_prob_exact(circuit, shape, dist, x)
        rhs = 0.0
        for x_prime, p in primes:
            acc = 0
            for z in zs:
                w0, w1 = compose_wz(shape, x, x_prime, z)
                acc += sensitivity_at(gw_reduction(circuit, shape, w0, w1), z)
            rhs += p * acc / len(zs)
        worst = max(worst, abs(lhs - rhs))
    passed = worst <= tolerance
    logger.info(
        f"Eq(3) check K={shape.K} M={shape.M}: {len(inputs)} inputs, "
        f"max |lhs - rhs| = {worst:.3g} -> {'PASS' if passed else 'FAIL'}"
    )
    return Eq3Result(passed=passed, inputs_checked=len(inputs), max_abs_error=worst)
