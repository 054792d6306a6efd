"""Resolve CircuitRef into circuits."""
import math

import numpy as np

from forrelab.core.errors import DomainRangeError
from forrelab.services.ac0 import builders
from forrelab.services.ac0.circuit import Ac0Circuit
from forrelab.services.ac0.netlist import load_netlist
from .models import CircuitRef

BUILDERS = ("parity", "or", "and", "threshold", "single-bit", "constant", "random", "phi-proxy")


def build_circuit(ref: CircuitRef) -> Ac0Circuit:
    if ref.path:
        return load_netlist(ref.path)
    n = ref.num_inputs
    name = ref.builder
    if name == "parity":
        return builders.parity_dnf(n)
    if name == "or":
        return builders.or_all(n)
    if name == "and":
        return builders.and_all(n)
    if name == "threshold":
        return builders.threshold_dnf(n, ref.param)
    if name == "single-bit":
        return builders.single_bit(n, ref.param)
    if name == "constant":
        return builders.constant(n, ref.param)
    if name == "random":
        return builders.random_circuit(n, ref.size, ref.depth, np.random.default_rng(ref.circuit_seed))
    if name == "phi-proxy":
        ell = int(math.log2(n)) - 1
        if ell < 0 or (2 << ell) != n:
            raise DomainRangeError(f"phi-proxy needs 2^(ell+1) inputs, got {n}")
        return builders.phi_sign_proxy(ell)
    raise DomainRangeError(f"unknown circuit builder {name!r}; choose from {', '.join(BUILDERS)}")
