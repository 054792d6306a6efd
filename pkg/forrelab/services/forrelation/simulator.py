"""
Statevector simulator for quantum query algorithms.

A QueryProgram is a sequence of layers over ``num_qubits`` qubits: Hadamard
layers, single-qubit gate layers and phase-oracle calls. Qubit q is bit q of
the basis-state index. An OracleCall applies (-1)^{oracle[offset + a(b)]} to
basis state b, where a(b) packs the bits of b on ``address_qubits`` (first
listed qubit = least significant address bit).

The run records, per oracle position, the accumulated query mass: after each
call every position gains the squared amplitude of the basis states that
address it. Each call adds exactly 1 in total when the whole register is
used as the address.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from forrelab.core.errors import DomainRangeError, ShapeMismatchError

logger = logging.getLogger(__name__)

MAX_QUBITS = 20
NORM_TOLERANCE = 1e-9

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)


@dataclass(frozen=True)
class HadamardLayer:
    """H on the listed qubits (all qubits when ``qubits`` is None)."""
    qubits: Optional[tuple[int, ...]] = None


@dataclass(frozen=True)
class GateLayer:
    """The same 2x2 unitary applied to each listed qubit."""
    matrix: np.ndarray
    qubits: tuple[int, ...]

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=np.complex128)
        if matrix.shape != (2, 2):
            raise ShapeMismatchError(f"gate must be 2x2, got {matrix.shape}")
        if not np.allclose(matrix.conj().T @ matrix, np.eye(2), atol=1e-12):
            raise DomainRangeError("gate matrix is not unitary")
        object.__setattr__(self, "matrix", matrix)


@dataclass(frozen=True)
class OracleCall:
    """Phase oracle reading oracle[offset + address]."""
    offset: int = 0
    address_qubits: Optional[tuple[int, ...]] = None


Layer = Union[HadamardLayer, GateLayer, OracleCall]


@dataclass(frozen=True)
class QueryProgram:
    num_qubits: int
    layers: tuple[Layer, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not 0 <= self.num_qubits <= MAX_QUBITS:
            raise DomainRangeError(
                f"num_qubits must be in [0, {MAX_QUBITS}], got {self.num_qubits}"
            )
        for layer in self.layers:
            qubits = getattr(layer, "qubits", None) or getattr(
                layer, "address_qubits", None
            ) or ()
            for q in qubits:
                if not 0 <= q < self.num_qubits:
                    raise ShapeMismatchError(
                        f"layer {layer!r} references qubit {q} outside "
                        f"a {self.num_qubits}-qubit register"
                    )

    @property
    def oracle_calls(self) -> int:
        return sum(isinstance(layer, OracleCall) for layer in self.layers)


@dataclass(frozen=True)
class QueryAlgorithmRun:
    """
    Final state of a simulated run plus its query accounting.

    Attributes:
        num_qubits (int): register size
        amplitudes (np.ndarray): final statevector, length 2^num_qubits
        query_mass (np.ndarray): accumulated mass per oracle position
        oracle_calls (int): number of oracle calls T
    """
    num_qubits: int
    amplitudes: np.ndarray
    query_mass: np.ndarray
    oracle_calls: int

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def total_query_mass(self) -> float:
        return float(self.query_mass.sum())

    def mass_of(self, positions: Sequence[int]) -> float:
        return float(self.query_mass[np.asarray(positions, dtype=np.int64)].sum())


def _address_table(num_qubits: int, qubits: Optional[tuple[int, ...]]) -> np.ndarray:
    basis = np.arange(1 << num_qubits, dtype=np.int64)
    if qubits is None:
        return basis
    address = np.zeros_like(basis)
    for j, q in enumerate(qubits):
        address |= ((basis >> q) & 1) << j
    return address


def _apply_gate(state: np.ndarray, matrix: np.ndarray, qubit: int, num_qubits: int):
    view = state.reshape(1 << (num_qubits - qubit - 1), 2, 1 << qubit)
    return np.einsum("ab,ibj->iaj", matrix, view).reshape(-1)


def _apply_hadamard_all(state: np.ndarray, num_qubits: int) -> np.ndarray:
    a = state
    n = a.size
    h = 1
    while h < n:
        a = a.reshape(n // (2 * h), 2, h)
        a = np.stack((a[:, 0, :] + a[:, 1, :], a[:, 0, :] - a[:, 1, :]), axis=1)
        h *= 2
    return a.reshape(n) / math.sqrt(n)


def run_query_algorithm(
    program: QueryProgram, oracle_bits: Sequence[int]
) -> QueryAlgorithmRun:
    """
    Simulate ``program`` from |0...0> against ``oracle_bits``.

    Args:
        program (QueryProgram): layers to apply in order
        oracle_bits: 0/1 values, one per oracle position

    Returns:
        QueryAlgorithmRun: final amplitudes and per-position query mass

    Raises:
        ShapeMismatchError: if an oracle call addresses a position that
            ``oracle_bits`` does not supply
    """
    oracle = np.asarray(oracle_bits, dtype=np.uint8).reshape(-1)
    nq = program.num_qubits
    state = np.zeros(1 << nq, dtype=np.complex128)
    state[0] = 1.0
    mass = np.zeros(oracle.size, dtype=np.float64)

    for index, layer in enumerate(program.layers):
        if isinstance(layer, HadamardLayer):
            if layer.qubits is None:
                state = _apply_hadamard_all(state, nq)
            else:
                for q in layer.qubits:
                    state = _apply_gate(state, HADAMARD, q, nq)
        elif isinstance(layer, GateLayer):
            for q in layer.qubits:
                state = _apply_gate(state, layer.matrix, q, nq)
        elif isinstance(layer, OracleCall):
            positions = layer.offset + _address_table(nq, layer.address_qubits)
            if positions.size and (
                positions.min() < 0 or positions.max() >= oracle.size
            ):
                raise ShapeMismatchError(
                    f"oracle call {index} reads positions up to "
                    f"{positions.max()} but only {oracle.size} oracle bits "
                    f"were supplied"
                )
            weights = np.abs(state) ** 2
            np.add.at(mass, positions, weights)
            state = state * (1.0 - 2.0 * oracle[positions])
        else:
            raise ShapeMismatchError(f"unknown layer type {type(layer).__name__}")

        norm = float(np.vdot(state, state).real)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise RuntimeError(
                f"state norm drifted to {norm} after layer {index}"
            )

    return QueryAlgorithmRun(
        num_qubits=nq,
        amplitudes=state,
        query_mass=mass,
        oracle_calls=program.oracle_calls,
    )


def forrelation_test_program(ell: int) -> QueryProgram:
    """
    H · phase(g) · H · phase(f) · H on ell qubits, oracle = f ‖ g.

    The amplitude of |0^ell> at the end equals the forrelation value.
    """
    return QueryProgram(
        num_qubits=ell,
        layers=(
            HadamardLayer(),
            OracleCall(offset=0),
            HadamardLayer(),
            OracleCall(offset=1 << ell),
            HadamardLayer(),
        ),
    )


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar-random 2x2 unitary via QR of a complex Gaussian matrix."""
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_query_program(
    num_qubits: int, oracle_calls: int, rng: np.random.Generator
) -> QueryProgram:
    """
    Alternate random single-qubit layers with full-register oracle calls.
    The oracle must supply 2^num_qubits positions.
    """
    layers: list[Layer] = [HadamardLayer()]
    for _ in range(oracle_calls):
        layers.append(OracleCall())
        for q in range(num_qubits):
            layers.append(GateLayer(random_unitary(rng), (q,)))
    return QueryProgram(num_qubits=num_qubits, layers=tuple(layers))


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def bbbv_bound(run: QueryAlgorithmRun, flipped: Sequence[int]) -> float:
    """2 * sqrt(T * mass(S)): bound on the output change when S is flipped."""
    return 2.0 * math.sqrt(run.oracle_calls * run.mass_of(flipped))
