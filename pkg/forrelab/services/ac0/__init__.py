"""
AC0 circuits: evaluation, sensitivity, block resampling and advantage.
"""

from .circuit import Ac0Circuit, CircuitBuilder, Gate, GateKind, evaluate
from .netlist import format_netlist, load_netlist, parse_netlist
from .builders import (
    and_all,
    constant,
    or_all,
    parity_dnf,
    phi_sign_proxy,
    random_circuit,
    single_bit,
    threshold_dnf,
)
from .rows import (
    BernoulliRows,
    MixtureRows,
    PatternedRows,
    RowDistribution,
    UniformRows,
    pattern_set_rows,
)
from .sensitivity import (
    sensitivity_at,
    sensitivity_tail_estimate,
    sensitivity_tail_exact,
)
from .block import (
    BlockMatrixShape,
    Eq3Result,
    block_resample_flip_prob,
    block_resample_flip_prob_exact,
    eq3_identity_check,
    expected_block_flip_prob,
    gw_reduction,
)
from .advantage import (
    HybridChain,
    acceptance_probability_exact,
    distinguishing_advantage,
    distinguishing_advantage_exact,
    hybrid_chain_advantages,
)

__all__ = [
    "Ac0Circuit",
    "CircuitBuilder",
    "Gate",
    "GateKind",
    "evaluate",
    "parse_netlist",
    "load_netlist",
    "format_netlist",
    "and_all",
    "or_all",
    "constant",
    "single_bit",
    "parity_dnf",
    "threshold_dnf",
    "random_circuit",
    "phi_sign_proxy",
    "RowDistribution",
    "UniformRows",
    "BernoulliRows",
    "PatternedRows",
    "MixtureRows",
    "pattern_set_rows",
    "sensitivity_at",
    "sensitivity_tail_estimate",
    "sensitivity_tail_exact",
    "BlockMatrixShape",
    "block_resample_flip_prob",
    "block_resample_flip_prob_exact",
    "expected_block_flip_prob",
    "gw_reduction",
    "eq3_identity_check",
    "Eq3Result",
    "distinguishing_advantage",
    "distinguishing_advantage_exact",
    "acceptance_probability_exact",
    "hybrid_chain_advantages",
    "HybridChain",
]
