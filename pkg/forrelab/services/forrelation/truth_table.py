"""
Packed truth tables and Forrelation instances.

A TruthTable stores a Boolean function over {0,1}^ell as 2^ell bits packed
little-endian (bit i of the table lives in byte i // 8 at position i % 8).
A ForrelationInstance is a pair (f, g) over the same domain plus the label of
the sampler that produced it; its block view is the L = 2^(ell+1) bit string
f ‖ g.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property

import numpy as np

from forrelab.core.errors import DomainRangeError, ShapeMismatchError

MAX_TABLE_ELL = 24


class Provenance(IntEnum):
    UNIFORM = 0
    GAUSSIAN_FORRELATED = 1
    EXACT_FORRELATED = 2

    @property
    def is_forrelated(self) -> bool:
        return self is not Provenance.UNIFORM


@dataclass(frozen=True, eq=False)
class TruthTable:
    """
    Boolean function {0,1}^ell -> {0,1} as packed bits.

    Attributes:
        ell (int): domain exponent, 0 <= ell <= 24
        packed (bytes): ceil(2^ell / 8) bytes, little-endian bit order
    """
    ell: int
    packed: bytes

    def __post_init__(self):
        if not 0 <= self.ell <= MAX_TABLE_ELL:
            raise DomainRangeError(
                f"ell must be in [0, {MAX_TABLE_ELL}], got {self.ell}"
            )
        expected = (self.size + 7) // 8
        if len(self.packed) != expected:
            raise ShapeMismatchError(
                f"packed table for ell={self.ell} needs {expected} bytes, "
                f"got {len(self.packed)}"
            )

    @classmethod
    def from_bits(cls, bits, ell: int | None = None) -> TruthTable:
        values = np.asarray(bits, dtype=np.uint8).reshape(-1)
        size = values.size
        if size == 0:
            raise ShapeMismatchError("truth table must have at least one entry")
        if ell is None:
            ell = size.bit_length() - 1
        if size != 1 << ell:
            raise ShapeMismatchError(
                f"truth table length {size} is not 2^{ell}"
            )
        packed = np.packbits(values & 1, bitorder="little").tobytes()
        return cls(ell=ell, packed=packed)

    @classmethod
    def from_string(cls, text: str) -> TruthTable:
        """Build from a '0'/'1' string listing f(0), f(1), ... in order."""
        return cls.from_bits([1 if c == "1" else 0 for c in text])

    @classmethod
    def constant(cls, ell: int, value: int = 0) -> TruthTable:
        return cls.from_bits(np.full(1 << ell, value & 1, dtype=np.uint8), ell)

    @property
    def size(self) -> int:
        return 1 << self.ell

    @cached_property
    def bits(self) -> np.ndarray:
        values = np.unpackbits(
            np.frombuffer(self.packed, dtype=np.uint8),
            count=self.size, bitorder="little",
        )
        values.setflags(write=False)
        return values

    @cached_property
    def signs(self) -> np.ndarray:
        """(-1)^f as float64."""
        values = 1.0 - 2.0 * self.bits
        values.setflags(write=False)
        return values

    def __getitem__(self, index: int) -> int:
        if not 0 <= index < self.size:
            raise IndexError(index)
        return (self.packed[index >> 3] >> (index & 7)) & 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.ell == other.ell and self.packed == other.packed

    def __hash__(self) -> int:
        return hash((self.ell, self.packed))

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def to_bytes(self) -> bytes:
        """ell as one byte, then the packed table."""
        return bytes([self.ell]) + self.packed

    @classmethod
    def from_bytes(cls, data: bytes, offset: int = 0) -> tuple[TruthTable, int]:
        """Decode a table at ``offset``; returns the table and the next offset."""
        if offset >= len(data):
            raise ShapeMismatchError("truncated truth table header")
        ell = data[offset]
        length = ((1 << ell) + 7) // 8
        end = offset + 1 + length
        if end > len(data):
            raise ShapeMismatchError(f"truncated truth table body for ell={ell}")
        return cls(ell=ell, packed=bytes(data[offset + 1:end])), end


@dataclass(frozen=True)
class ForrelationInstance:
    """
    A pair of functions over {0,1}^ell and the sampler that produced it.
    """
    f: TruthTable
    g: TruthTable
    provenance: Provenance

    def __post_init__(self):
        if self.f.ell != self.g.ell:
            raise ShapeMismatchError(
                f"f and g domains differ: {self.f.ell} vs {self.g.ell}"
            )

    @property
    def ell(self) -> int:
        return self.f.ell

    @property
    def length(self) -> int:
        """Serialized block length L = 2^(ell+1)."""
        return 2 << self.ell

    @cached_property
    def bits(self) -> np.ndarray:
        values = np.concatenate((self.f.bits, self.g.bits))
        values.setflags(write=False)
        return values

    def bit(self, position: int) -> int:
        half = self.f.size
        if position < half:
            return self.f[position]
        return self.g[position - half]

    def to_bytes(self) -> bytes:
        return self.f.to_bytes() + self.g.to_bytes() + bytes([int(self.provenance)])

    @classmethod
    def from_bytes(
        cls, data: bytes, offset: int = 0
    ) -> tuple[ForrelationInstance, int]:
        f, offset = TruthTable.from_bytes(data, offset)
        g, offset = TruthTable.from_bytes(data, offset)
        if offset >= len(data):
            raise ShapeMismatchError("truncated instance provenance tag")
        try:
            provenance = Provenance(data[offset])
        except ValueError as e:
            raise ShapeMismatchError(f"unknown provenance tag {data[offset]}") from e
        return cls(f=f, g=g, provenance=provenance), offset + 1

    @classmethod
    def from_block_bits(
        cls, bits, provenance: Provenance
    ) -> ForrelationInstance:
        """Split an L-bit block f ‖ g back into an instance."""
        values = np.asarray(bits, dtype=np.uint8).reshape(-1)
        half = values.size // 2
        return cls(
            f=TruthTable.from_bits(values[:half]),
            g=TruthTable.from_bits(values[half:]),
            provenance=provenance,
        )
