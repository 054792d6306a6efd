"""
Forrelation instances, samplers and the quantum decoder.

This package provides packed truth tables, the uniform / Gaussian / exact
Forrelated samplers, the forrelation value Phi, a statevector simulator for
query algorithms and the amplified 2-query decoder.
"""

from .truth_table import ForrelationInstance, Provenance, TruthTable
from .transform import forrelation_value, forrelation_values, fwht
from .samplers import (
    SamplerKind,
    default_eps,
    forrelate_table,
    sample_exact_forrelated,
    sample_forrelated,
    sample_gaussian_forrelated,
    sample_patterned_block,
    sample_uniform_instance,
)
from .simulator import (
    GateLayer,
    HadamardLayer,
    OracleCall,
    QueryAlgorithmRun,
    QueryProgram,
    bbbv_bound,
    forrelation_test_program,
    run_query_algorithm,
)
from .decoder import (
    CalibrationResult,
    acceptance_probability,
    amplified_repetitions,
    calibrate_threshold,
    decode_error_probability,
    quantum_forrelation_test,
)

__all__ = [
    "TruthTable",
    "ForrelationInstance",
    "Provenance",
    "fwht",
    "forrelation_value",
    "forrelation_values",
    "SamplerKind",
    "default_eps",
    "forrelate_table",
    "sample_uniform_instance",
    "sample_gaussian_forrelated",
    "sample_exact_forrelated",
    "sample_forrelated",
    "sample_patterned_block",
    "HadamardLayer",
    "GateLayer",
    "OracleCall",
    "QueryProgram",
    "QueryAlgorithmRun",
    "run_query_algorithm",
    "forrelation_test_program",
    "bbbv_bound",
    "acceptance_probability",
    "quantum_forrelation_test",
    "decode_error_probability",
    "amplified_repetitions",
    "calibrate_threshold",
    "CalibrationResult",
]
