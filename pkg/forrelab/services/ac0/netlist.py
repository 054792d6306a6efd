"""
Line-oriented netlist format for Ac0Circuit.

    # comment
    INPUTS 6
    g0 AND x0 x1 x2
    g1 NOT g0
    g2 OR g1 x5
    c1 CONST 1
    OUTPUT g2

Inputs are referenced as ``x<i>``. Every gate line is ``id TYPE fanin...``
and may only reference inputs or gates declared above it. When the
``INPUTS`` line is missing the arity is one more than the largest input index.
"""
import logging
import re
from pathlib import Path
from typing import Union

from forrelab.core.errors import NetlistFormatError, ShapeMismatchError
from .circuit import Ac0Circuit, Gate, GateKind

logger = logging.getLogger(__name__)

_INPUT_RE = re.compile(r"^x(\d+)$")
_ID_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


def parse_netlist(text: str) -> Ac0Circuit:
    """
    Parse netlist text into a circuit.

    Raises:
        NetlistFormatError: on unknown gate types, undeclared references,
            duplicate ids or a missing OUTPUT line
    """
    declared_inputs = None
    max_input = -1
    statements: list[tuple[int, str, GateKind, list[str], int]] = []
    output_ref = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0].upper()
        if head == "INPUTS":
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise NetlistFormatError(f"line {lineno}: expected 'INPUTS <count>'")
            declared_inputs = int(tokens[1])
            continue
        if head == "OUTPUT":
            if len(tokens) != 2:
                raise NetlistFormatError(f"line {lineno}: expected 'OUTPUT <id>'")
            output_ref = tokens[1]
            continue
        if len(tokens) < 2:
            raise NetlistFormatError(f"line {lineno}: expected 'id TYPE fanin...'")
        gate_id, kind_name, refs = tokens[0], tokens[1].upper(), tokens[2:]
        if _INPUT_RE.match(gate_id) or not _ID_RE.match(gate_id):
            raise NetlistFormatError(f"line {lineno}: invalid gate id {gate_id!r}")
        try:
            kind = GateKind(kind_name)
        except ValueError:
            raise NetlistFormatError(f"line {lineno}: unknown gate type {kind_name!r}")
        value = 0
        if kind is GateKind.CONST:
            if len(refs) != 1 or refs[0] not in ("0", "1"):
                raise NetlistFormatError(f"line {lineno}: CONST takes a single 0 or 1")
            value, refs = int(refs[0]), []
        for ref in refs:
            m = _INPUT_RE.match(ref)
            if m:
                max_input = max(max_input, int(m.group(1)))
        statements.append((lineno, gate_id, kind, refs, value))

    if output_ref is None:
        raise NetlistFormatError("netlist has no OUTPUT line")
    m = _INPUT_RE.match(output_ref)
    if m:
        max_input = max(max_input, int(m.group(1)))
    num_inputs = declared_inputs if declared_inputs is not None else max_input + 1
    if max_input >= num_inputs:
        raise NetlistFormatError(
            f"input x{max_input} referenced but only {num_inputs} inputs declared"
        )

    ids: dict[str, int] = {}
    gates: list[Gate] = []

    def resolve(ref: str, lineno: int) -> int:
        m = _INPUT_RE.match(ref)
        if m:
            return int(m.group(1))
        if ref not in ids:
            raise NetlistFormatError(f"line {lineno}: reference to undeclared node {ref!r}")
        return ids[ref]

    for lineno, gate_id, kind, refs, value in statements:
        if gate_id in ids:
            raise NetlistFormatError(f"line {lineno}: duplicate gate id {gate_id!r}")
        fanin = tuple(resolve(r, lineno) for r in refs)
        try:
            gates.append(Gate(kind, fanin, value))
        except ShapeMismatchError as e:
            raise NetlistFormatError(f"line {lineno}: {e}") from e
        ids[gate_id] = num_inputs + len(gates) - 1

    output = resolve(output_ref, 0)
    circuit = Ac0Circuit(num_inputs, tuple(gates), output)
    logger.debug(
        f"Parsed netlist: {num_inputs} inputs, size {circuit.size}, depth {circuit.depth}"
    )
    return circuit


def load_netlist(path: Union[str, Path]) -> Ac0Circuit:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise NetlistFormatError(f"cannot read netlist {path}: {e}") from e
    return parse_netlist(text)


def format_netlist(circuit: Ac0Circuit) -> str:
    """Render a circuit in the netlist format; gates are named g<j>."""

    def name(node: int) -> str:
        if node < circuit.num_inputs:
            return f"x{node}"
        return f"g{node - circuit.num_inputs}"

    lines = [f"INPUTS {circuit.num_inputs}"]
    for j, gate in enumerate(circuit.gates):
        if gate.kind is GateKind.CONST:
            lines.append(f"g{j} CONST {gate.value}")
        else:
            refs = " ".join(name(s) for s in gate.fanin)
            lines.append(f"g{j} {gate.kind.value} {refs}".rstrip())
    lines.append(f"OUTPUT {name(circuit.output)}")
    return "\n".join(lines) + "\n"
