"""
Unbounded fan-in AND/OR/NOT circuits.

Nodes are numbered with the inputs first (0 .. num_inputs - 1) followed by the
gates in topological order, so gate j is node num_inputs + j and may only read
nodes with a smaller number. Size counts AND and OR gates; NOT gates and
constants are free. Depth is the number of alternating AND/OR layers after
pushing every NOT down to the leaves.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from forrelab.core.bits import bits_to_array
from forrelab.core.errors import ShapeMismatchError

logger = logging.getLogger(__name__)

BitsLike = Union[str, Sequence[int], np.ndarray]


class GateKind(str, Enum):
    AND = "AND"
    OR = "OR"
    NOT = "NOT"
    CONST = "CONST"


_DUAL = {GateKind.AND: GateKind.OR, GateKind.OR: GateKind.AND}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    fanin: tuple[int, ...] = ()
    value: int = 0

    def __post_init__(self):
        if self.kind is GateKind.NOT and len(self.fanin) != 1:
            raise ShapeMismatchError(f"NOT gate needs exactly one input, got {len(self.fanin)}")
        if self.kind is GateKind.CONST and self.fanin:
            raise ShapeMismatchError("CONST gate takes no inputs")


def as_input_array(bits: BitsLike, width: int) -> np.ndarray:
    """Coerce a bit string / sequence / array to a uint8 array of 0/1."""
    if isinstance(bits, str):
        values = bits_to_array(bits)
    else:
        values = np.asarray(bits, dtype=np.uint8) & 1
    if values.shape[-1] != width:
        raise ShapeMismatchError(f"circuit takes {width} inputs, got {values.shape[-1]}")
    return values


@dataclass(frozen=True)
class Ac0Circuit:
    """
    A DAG of unbounded fan-in gates over ``num_inputs`` input bits.

    Attributes:
        num_inputs (int): input count N_in
        gates (tuple[Gate, ...]): gates in topological order
        output (int): node id of the output
    """
    num_inputs: int
    gates: tuple[Gate, ...]
    output: int

    def __post_init__(self):
        if self.num_inputs < 0:
            raise ShapeMismatchError("num_inputs must be non-negative")
        for j, gate in enumerate(self.gates):
            node = self.num_inputs + j
            for src in gate.fanin:
                if not 0 <= src < node:
                    raise ShapeMismatchError(
                        f"gate {node} reads node {src}, which does not precede it"
                    )
        if not 0 <= self.output < self.num_nodes:
            raise ShapeMismatchError(f"output node {self.output} does not exist")

    @property
    def num_nodes(self) -> int:
        return self.num_inputs + len(self.gates)

    def gate(self, node: int) -> Gate | None:
        """The gate at ``node``, or None when ``node`` is an input."""
        if node < self.num_inputs:
            return None
        return self.gates[node - self.num_inputs]

    @cached_property
    def size(self) -> int:
        return sum(g.kind in (GateKind.AND, GateKind.OR) for g in self.gates)

    @cached_property
    def depth(self) -> int:
        # (top kind, depth) per node and polarity, after NOTs are pushed down
        top: list[list] = [[None, None] for _ in range(self.num_nodes)]
        depth = [[0, 0] for _ in range(self.num_nodes)]
        for j, gate in enumerate(self.gates):
            node = self.num_inputs + j
            for neg in (0, 1):
                if gate.kind is GateKind.CONST:
                    continue
                if gate.kind is GateKind.NOT:
                    src = gate.fanin[0]
                    top[node][neg] = top[src][1 - neg]
                    depth[node][neg] = depth[src][1 - neg]
                    continue
                kind = _DUAL[gate.kind] if neg else gate.kind
                d = 1
                for src in gate.fanin:
                    same = top[src][neg] is kind
                    d = max(d, depth[src][neg] + (0 if same else 1))
                top[node][neg] = kind
                depth[node][neg] = d
        return depth[self.output][0]

    def evaluate_batch(self, inputs: np.ndarray) -> np.ndarray:
        """
        Evaluate on a (batch, num_inputs) array of 0/1.

        Returns:
            np.ndarray: (batch,) uint8 outputs
        """
        inputs = np.atleast_2d(np.asarray(inputs, dtype=bool))
        if inputs.shape[1] != self.num_inputs:
            raise ShapeMismatchError(
                f"circuit takes {self.num_inputs} inputs, got {inputs.shape[1]}"
            )
        batch = inputs.shape[0]
        values = np.empty((self.num_nodes, batch), dtype=bool)
        values[: self.num_inputs] = inputs.T
        for j, gate in enumerate(self.gates):
            node = self.num_inputs + j
            if gate.kind is GateKind.CONST:
                values[node] = bool(gate.value)
            elif gate.kind is GateKind.NOT:
                values[node] = ~values[gate.fanin[0]]
            elif gate.kind is GateKind.AND:
                values[node] = (
                    values[list(gate.fanin)].all(axis=0) if gate.fanin else True
                )
            else:
                values[node] = (
                    values[list(gate.fanin)].any(axis=0) if gate.fanin else False
                )
        return values[self.output].astype(np.uint8)

    def permute_inputs(self, perm: Sequence[int]) -> Ac0Circuit:
        """
        Relabel inputs so that old input i becomes input perm[i].

        Evaluating the result on x permuted the same way gives the same value.
        """
        perm = list(perm)
        if sorted(perm) != list(range(self.num_inputs)):
            raise ShapeMismatchError("perm must be a permutation of the inputs")

        def remap(src: int) -> int:
            return perm[src] if src < self.num_inputs else src

        gates = tuple(
            Gate(g.kind, tuple(remap(s) for s in g.fanin), g.value) for g in self.gates
        )
        return Ac0Circuit(self.num_inputs, gates, remap(self.output))


def evaluate(circuit: Ac0Circuit, input_bits: BitsLike) -> int:
    """
    Evaluate ``circuit`` on a single input.

    Args:
        circuit (Ac0Circuit): the circuit
        input_bits: bit string or 0/1 sequence of length num_inputs

    Returns:
        int: output bit

    Raises:
        ShapeMismatchError: if the input length does not match
    """
    values = as_input_array(input_bits, circuit.num_inputs)
    return int(circuit.evaluate_batch(values.reshape(1, -1))[0])


class CircuitBuilder:
    """Incremental construction helper; node ids follow the circuit numbering."""

    def __init__(self, num_inputs: int):
        self.num_inputs = num_inputs
        self.gates: list[Gate] = []
        self._consts: dict[int, int] = {}

    def add(self, kind: GateKind, fanin: Sequence[int] = (), value: int = 0) -> int:
        self.gates.append(Gate(kind, tuple(fanin), value))
        return self.num_inputs + len(self.gates) - 1

    def AND(self, *fanin: int) -> int:
        return self.add(GateKind.AND, fanin)

    def OR(self, *fanin: int) -> int:
        return self.add(GateKind.OR, fanin)

    def NOT(self, src: int) -> int:
        return self.add(GateKind.NOT, (src,))

    def const(self, value: int) -> int:
        value = int(value) & 1
        if value not in self._consts:
            self._consts[value] = self.add(GateKind.CONST, value=value)
        return self._consts[value]

    def build(self, output: int) -> Ac0Circuit:
        return Ac0Circuit(self.num_inputs, tuple(self.gates), output)
