"""
Oracle B: an NP oracle relative to (A, B) on nondeterministic oracle circuits.

A query is a bit string of length l holding the UTF-8 text of a circuit
(8 bits per character, most significant bit first), one statement per line:

    WITNESS k                 k witness bits w0 .. w{k-1}
    FIX i b                   pin witness bit i to b (contradicting FIX lines
                              make the circuit unsatisfiable)
    ORACLE id A|B token...    query A or B on the concatenation of the tokens
                              (bit literals or witness bits w<i>)
    id AND|OR|NOT operand...  operands are w<i>, 0, 1 or earlier ids
    OUTPUT operand

B answers 1 iff some assignment of the free witness bits makes the output 1.
Oracle strings are limited to floor(sqrt(l)) bits, which makes the
recursion through B terminate; together with the witness cap and fewer than l
statements this is checked before anything is evaluated. Queries that fail
any check are malformed and answer 0.
"""
from __future__ import annotations

import itertools
import logging
import math
import re
import threading
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

from forrelab.core.bits import is_bitstring
from forrelab.core.config.settings import settings

if TYPE_CHECKING:
    from .world import OracleWorld

logger = logging.getLogger(__name__)

_WITNESS_RE = re.compile(r"^w(\d+)$")
_ID_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_GATES = {"AND", "OR", "NOT"}


class MalformedQuery(ValueError):
    """Internal signal for a query that answers 0."""


def encode_query(text: str) -> str:
    """UTF-8 text -> bit string, 8 bits per byte, MSB first."""
    return "".join(format(b, "08b") for b in text.encode("utf-8"))


def decode_query(bits: str) -> Optional[str]:
    if not bits or len(bits) % 8 or not is_bitstring(bits):
        return None
    data = bytes(int(bits[i:i + 8], 2) for i in range(0, len(bits), 8))
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        return None


@dataclass(frozen=True)
class OracleStatement:
    gate_id: str
    oracle: str
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class GateStatement:
    gate_id: str
    op: str
    operands: tuple[str, ...]


@dataclass
class CircuitQuery:
    """A parsed nondeterministic oracle circuit."""
    witness_bits: int = 0
    fixed: dict[int, int] = field(default_factory=dict)
    contradictory: bool = False
    statements: list = field(default_factory=list)
    output: str = "0"


def parse_query(text: str, query_length: int, max_witness_bits: int) -> CircuitQuery:
    """
    Parse and validate circuit text for a query of ``query_length`` bits.

    Raises:
        MalformedQuery: on any syntax error or violated restriction
    """
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines or len(lines) >= query_length:
        raise MalformedQuery("statement count must be in [1, l)")
    limit = math.isqrt(query_length)
    query = CircuitQuery()
    defined: set[str] = set()
    seen_witness = False
    output = None

    for line in lines:
        tokens = line.split()
        head = tokens[0]
        if head == "WITNESS":
            if seen_witness or len(tokens) != 2 or not tokens[1].isdigit():
                raise MalformedQuery(f"bad WITNESS line {line!r}")
            query.witness_bits = int(tokens[1])
            if query.witness_bits > max_witness_bits:
                raise MalformedQuery(f"{query.witness_bits} witness bits exceed the cap")
            seen_witness = True
        elif head == "FIX":
            if len(tokens) != 3 or not tokens[1].isdigit() or tokens[2] not in ("0", "1"):
                raise MalformedQuery(f"bad FIX line {line!r}")
            index, bit = int(tokens[1]), int(tokens[2])
            if query.fixed.setdefault(index, bit) != bit:
                query.contradictory = True
        elif head == "OUTPUT":
            if len(tokens) != 2 or output is not None:
                raise MalformedQuery(f"bad OUTPUT line {line!r}")
            output = tokens[1]
        elif head == "ORACLE":
            if len(tokens) < 3 or tokens[2] not in ("A", "B"):
                raise MalformedQuery(f"bad ORACLE line {line!r}")
            gate_id = tokens[1]
            length = 0
            for token in tokens[3:]:
                if _WITNESS_RE.match(token):
                    length += 1
                elif is_bitstring(token):
                    length += len(token)
                else:
                    raise MalformedQuery(f"bad oracle token {token!r}")
            if length > limit:
                raise MalformedQuery(f"oracle string of {length} bits exceeds floor(sqrt({query_length}))")
            query.statements.append(OracleStatement(gate_id, tokens[2], tuple(tokens[3:])))
            _declare(gate_id, defined)
        elif len(tokens) >= 2 and tokens[1] in _GATES:
            gate_id, op, operands = tokens[0], tokens[1], tuple(tokens[2:])
            if op == "NOT" and len(operands) != 1:
                raise MalformedQuery("NOT takes exactly one operand")
            for operand in operands:
                _check_operand(operand, defined)
            query.statements.append(GateStatement(gate_id, op, operands))
            _declare(gate_id, defined)
        else:
            raise MalformedQuery(f"unknown statement {line!r}")

    if output is None:
        raise MalformedQuery("missing OUTPUT")
    _check_operand(output, defined)
    query.output = output
    for index in list(query.fixed) + _witness_refs(query):
        if index >= query.witness_bits:
            raise MalformedQuery(f"witness bit {index} out of range")
    return query


def _declare(gate_id: str, defined: set[str]):
    if not _ID_RE.match(gate_id) or _WITNESS_RE.match(gate_id) or gate_id in defined:
        raise MalformedQuery(f"invalid or duplicate id {gate_id!r}")
    defined.add(gate_id)


def _check_operand(operand: str, defined: set[str]):
    if operand in ("0", "1") or _WITNESS_RE.match(operand) or operand in defined:
        return
    raise MalformedQuery(f"undefined operand {operand!r}")


def _witness_refs(query: CircuitQuery) -> list[int]:
    refs = []
    for st in query.statements:
        tokens = st.tokens if isinstance(st, OracleStatement) else st.operands
        refs += [int(m.group(1)) for m in map(_WITNESS_RE.match, tokens) if m]
    m = _WITNESS_RE.match(query.output)
    if m:
        refs.append(int(m.group(1)))
    return refs


class NpOracleB:
    """
    Lazily evaluated oracle B over one world.

    Answers are memoized by query string; the memo is the only mutable state
    and is guarded by a lock. With ``memoize=False`` every query, including
    nested B calls, is evaluated from scratch.
    """

    def __init__(
        self,
        world: OracleWorld,
        memoize: bool = True,
        max_witness_bits: Optional[int] = None,
    ):
        self.world = world
        self.memoize = memoize
        self.max_witness_bits = (
            settings.max_witness_bits if max_witness_bits is None else max_witness_bits
        )
        self._memo: dict[str, int] = {}
        self._lock = threading.Lock()

    @property
    def memo_size(self) -> int:
        return len(self._memo)

    def query(self, encoded_query: str) -> int:
        """
        Answer B on a bit-string query.

        Returns:
            int: 1 iff the encoded circuit is satisfiable; 0 for unsatisfiable
                or malformed queries
        """
        if self.memoize:
            with self._lock:
                hit = self._memo.get(encoded_query)
            if hit is not None:
                return hit
        answer = self._answer(encoded_query)
        if self.memoize:
            with self._lock:
                self._memo[encoded_query] = answer
        return answer

    def _answer(self, encoded_query: str) -> int:
        text = decode_query(encoded_query)
        if text is None:
            logger.debug("B query is not UTF-8 text; answering 0")
            return 0
        try:
            circuit = parse_query(text, len(encoded_query), self.max_witness_bits)
        except MalformedQuery as e:
            logger.debug(f"Malformed B query ({e}); answering 0")
            return 0
        return self.satisfiable(circuit)

    def satisfiable(self, circuit: CircuitQuery) -> int:
        if circuit.contradictory:
            return 0
        free = [i for i in range(circuit.witness_bits) if i not in circuit.fixed]
        witness = [circuit.fixed.get(i, 0) for i in range(circuit.witness_bits)]
        for assignment in itertools.product((0, 1), repeat=len(free)):
            for i, bit in zip(free, assignment):
                witness[i] = bit
            if self.run(circuit, witness):
                return 1
        return 0

    def run(self, circuit: CircuitQuery, witness: list[int]) -> int:
        """Evaluate the circuit on one full witness assignment."""
        env: dict[str, int] = {}

        def value(token: str) -> int:
            if token in ("0", "1"):
                return int(token)
            m = _WITNESS_RE.match(token)
            if m:
                return witness[int(m.group(1))]
            return env[token]

        for st in circuit.statements:
            if isinstance(st, OracleStatement):
                string = "".join(
                    str(witness[int(m.group(1))]) if (m := _WITNESS_RE.match(t)) else t
                    for t in st.tokens
                )
                env[st.gate_id] = (
                    self.world.read_a(string) if st.oracle == "A" else self.query(string)
                )
            elif st.op == "NOT":
                env[st.gate_id] = 1 - value(st.operands[0])
            elif st.op == "AND":
                env[st.gate_id] = int(all(value(o) for o in st.operands))
            else:
                env[st.gate_id] = int(any(value(o) for o in st.operands))
        return value(circuit.output)


def query_b(world: OracleWorld, encoded_query: str) -> int:
    """B on ``world``; malformed queries answer 0."""
    return world.oracle_b.query(encoded_query)


def reference_query_b(world: OracleWorld, encoded_query: str) -> int:
    """Memo-free evaluation of B, for cross-checking the memoized oracle."""
    return NpOracleB(world, memoize=False).query(encoded_query)


def find_witness(oracle: NpOracleB, text: str) -> Optional[str]:
    """
    Extract a witness with B queries only, fixing one bit at a time.

    Returns:
        str | None: witness bits w0 .. w{k-1}, or None when the circuit is
            unsatisfiable or malformed
    """
    if oracle.query(encode_query(text)) == 0:
        return None
    witness_bits = 0
    for line in text.splitlines():
        tokens = line.split()
        if len(tokens) == 2 and tokens[0] == "WITNESS" and tokens[1].isdigit():
            witness_bits = int(tokens[1])
    fixes: list[str] = []
    bits = []
    for i in range(witness_bits):
        trial = "\n".join([text, *fixes, f"FIX {i} 0"])
        bit = 0 if oracle.query(encode_query(trial)) else 1
        fixes.append(f"FIX {i} {bit}")
        bits.append(str(bit))
    witness = "".join(bits)
    logger.info(f"Witness found with {witness_bits + 1} B queries: {witness or '(empty)'}")
    return witness
