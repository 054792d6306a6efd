"""
Circuit adversaries: an AC0 netlist reading a fixed window of A plus the
challenge bits.
"""
import logging
from typing import Sequence

import numpy as np

from forrelab.core.errors import AdversaryProtocolError
from forrelab.services.ac0.circuit import Ac0Circuit, evaluate
from forrelab.services.oracle_world.handle import OracleHandle

logger = logging.getLogger(__name__)


class NetlistAdversary:
    """
    Inputs 0 .. len(window) - 1 of the circuit are A at the window addresses;
    the remaining inputs are the challenge bits, in order.

    Args:
        circuit (Ac0Circuit): the distinguisher
        window (Sequence[str]): A addresses read on every run
    """

    def __init__(self, circuit: Ac0Circuit, window: Sequence[str]):
        self.circuit = circuit
        self.window = list(window)

    def __call__(self, handle: OracleHandle, challenge: str, rng: np.random.Generator) -> int:
        expected = len(self.window) + len(challenge)
        if self.circuit.num_inputs != expected:
            raise AdversaryProtocolError(
                f"netlist takes {self.circuit.num_inputs} inputs; window + challenge give {expected}"
            )
        bits = "".join(str(handle.read_a(address)) for address in self.window) + challenge
        return evaluate(self.circuit, bits)
