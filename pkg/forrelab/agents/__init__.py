"""
Adversaries: built-in strategies, AC0 netlists over a window of A, external
processes, and the advantage-squaring wrapper.
"""

from .base import Adversary
from .strategies import (
    BOnlyAdversary,
    ConstantAdversary,
    DecodeAndCompareAdversary,
    FirstBitAdversary,
    RandomBitAdversary,
    ReadBitAdversary,
)
from .netlist_adversary import NetlistAdversary
from .external import ExternalAdversary
from .squaring import AdvantageSquaringAdversary, advantage_squaring_wrap
from .reference import PlaintextPeekingInverter, TrapdoorHoldingInverter
from .registry import AdversaryRef, build_adversary, build_inverter

__all__ = [
    "Adversary",
    "BOnlyAdversary",
    "ConstantAdversary",
    "DecodeAndCompareAdversary",
    "FirstBitAdversary",
    "RandomBitAdversary",
    "ReadBitAdversary",
    "NetlistAdversary",
    "ExternalAdversary",
    "AdvantageSquaringAdversary",
    "advantage_squaring_wrap",
    "PlaintextPeekingInverter",
    "TrapdoorHoldingInverter",
    "AdversaryRef",
    "build_adversary",
    "build_inverter",
]
