"""
Bit-string helpers.

Bit strings are ``str`` over {'0', '1'}, most significant bit first. Integers
are converted with a fixed width so that concatenations such as k ‖ x ‖ y have
a well-defined layout.
"""
from typing import Sequence

import numpy as np

from forrelab.core.errors import DomainRangeError


def int_to_bits(value: int, width: int) -> str:
    if width == 0:
        return ""
    if value < 0 or value >= (1 << width):
        raise ValueError(f"value {value} does not fit in {width} bits")
    return format(value, f"0{width}b")


def bits_to_int(bits: str) -> int:
    return int(bits, 2) if bits else 0


def is_bitstring(bits: str) -> bool:
    return all(c in "01" for c in bits)


def bit_at(value: int, width: int, index: int) -> int:
    """Bit ``index`` (0 = most significant) of a ``width``-bit value."""
    return (value >> (width - 1 - index)) & 1


def index_width(count: int) -> int:
    """Number of bits needed to address ``count`` items (at least 1)."""
    return max(1, (count - 1).bit_length())


def inner_product(a: int, b: int) -> int:
    """Inner product over GF(2): parity of a AND b."""
    return bin(a & b).count("1") & 1


def bits_to_array(bits: str) -> np.ndarray:
    return np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")


def array_to_bits(values: Sequence[int]) -> str:
    return "".join("1" if v else "0" for v in values)


def hex_to_bits(text: str, width: int | None = None) -> str:
    """Parse a hex string (optionally ``0x``-prefixed) into a bit string."""
    text = text.lower().removeprefix("0x")
    try:
        bits = "".join(format(int(c, 16), "04b") for c in text)
    except ValueError as e:
        raise DomainRangeError(f"not a hex string: {text!r}") from e
    if width is not None:
        if len(bits) < width:
            bits = bits.rjust(width, "0")
        elif len(bits) > width:
            excess = bits[: len(bits) - width]
            if "1" in excess:
                raise DomainRangeError(f"hex value {text} does not fit in {width} bits")
            bits = bits[len(bits) - width:]
    return bits


def bits_to_hex(bits: str) -> str:
    if not bits:
        return ""
    padded = bits.rjust((len(bits) + 3) // 4 * 4, "0")
    return "".join(
        format(int(padded[i:i + 4], 2), "x") for i in range(0, len(padded), 4)
    )
