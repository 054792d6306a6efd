"""
Resolve adversary references from game specs, the CLI and the HTTP API.
"""
import logging
from typing import Literal, Optional

from pydantic import BaseModel, Field

from forrelab.core.errors import DomainRangeError
from forrelab.services.ac0.netlist import load_netlist
from forrelab.services.crypto.fake_pk import (
    Inverter,
    fake_pk_adversary_wrap,
    random_guess_inverter,
    trivial_inverter,
)
from forrelab.services.oracle_world.world import OracleWorld, TrapdoorOracleWorld
from .base import Adversary
from .external import ExternalAdversary
from .netlist_adversary import NetlistAdversary
from .reference import PlaintextPeekingInverter, TrapdoorHoldingInverter
from .squaring import advantage_squaring_wrap
from .strategies import (
    BOnlyAdversary,
    ConstantAdversary,
    DecodeAndCompareAdversary,
    FirstBitAdversary,
    RandomBitAdversary,
    ReadBitAdversary,
)

logger = logging.getLogger(__name__)

BUILTIN_ADVERSARIES = (
    "constant0",
    "constant1",
    "random",
    "first-bit",
    "b-only",
    "decode-compare",
    "read-bit",
)
INVERTERS = ("trivial", "random-guess", "trapdoor-holding", "plaintext-peeking")
REFERENCE_INVERTERS = ("trapdoor-holding", "plaintext-peeking")


class AdversaryRef(BaseModel):
    """
    Which adversary to run.

    Attributes:
        kind: built-in strategy, netlist circuit file or external program
        name: built-in name, or ``fake-pk:<inverter>`` for the pk distinguisher
        path: netlist file
        window: A addresses a netlist reads before the challenge bits
        command: external program command line
        address: A address for ``read-bit``
        inverter: inverter name for inversion games
        squaring: wrap the adversary in the advantage-squaring wrapper
    """
    kind: Literal["builtin", "netlist", "external"] = "builtin"
    name: str = "constant0"
    path: Optional[str] = None
    window: list[str] = Field(default_factory=list)
    command: Optional[str] = None
    address: Optional[str] = None
    inverter: str = "trivial"
    squaring: bool = False


def build_inverter(name: str, world: Optional[OracleWorld] = None) -> Inverter:
    if name == "trivial":
        return trivial_inverter
    if name == "random-guess":
        return random_guess_inverter
    if name in REFERENCE_INVERTERS:
        if not isinstance(world, TrapdoorOracleWorld):
            raise DomainRangeError(f"inverter {name!r} needs a trapdoor world")
        cls = TrapdoorHoldingInverter if name == "trapdoor-holding" else PlaintextPeekingInverter
        return cls(world)
    raise DomainRangeError(f"unknown inverter {name!r}; choose from {', '.join(INVERTERS)}")


def _builtin(ref: AdversaryRef, world: Optional[OracleWorld]) -> Adversary:
    name = ref.name
    if name.startswith("fake-pk:"):
        return fake_pk_adversary_wrap(build_inverter(name.split(":", 1)[1], world))
    if name in ("constant0", "constant1"):
        return ConstantAdversary(int(name[-1]))
    if name == "random":
        return RandomBitAdversary()
    if name == "first-bit":
        return FirstBitAdversary()
    if name == "b-only":
        return BOnlyAdversary()
    if name == "decode-compare":
        return DecodeAndCompareAdversary()
    if name == "read-bit":
        if ref.address is None:
            raise DomainRangeError("read-bit needs an address")
        return ReadBitAdversary(ref.address)
    raise DomainRangeError(
        f"unknown adversary {name!r}; choose from {', '.join(BUILTIN_ADVERSARIES)} or fake-pk:<inverter>"
    )


def build_adversary(ref: AdversaryRef, world: Optional[OracleWorld] = None) -> Adversary:
    """
    Instantiate ``ref``. ``world`` is only consulted for reference inverters
    wrapped by ``fake-pk:``.
    """
    if ref.kind == "netlist":
        if ref.path is None:
            raise DomainRangeError("netlist adversary needs a path")
        adversary = NetlistAdversary(load_netlist(ref.path), ref.window)
    elif ref.kind == "external":
        if not ref.command:
            raise DomainRangeError("external adversary needs a command")
        adversary = ExternalAdversary(ref.command)
    else:
        adversary = _builtin(ref, world)
    if ref.squaring:
        adversary = advantage_squaring_wrap(adversary)
    return adversary
