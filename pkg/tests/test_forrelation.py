"""
Tests for truth tables, samplers, the forrelation value and the decoder.
"""
import numpy as np
import pytest

from forrelab.core.errors import DomainRangeError, ShapeMismatchError
from forrelab.services.ac0.rows import all_rows
from forrelab.services.forrelation import (
    ForrelationInstance,
    Provenance,
    SamplerKind,
    TruthTable,
    acceptance_probability,
    amplified_repetitions,
    bbbv_bound,
    calibrate_threshold,
    decode_error_probability,
    forrelate_table,
    forrelation_test_program,
    forrelation_value,
    forrelation_values,
    fwht,
    quantum_forrelation_test,
    run_query_algorithm,
    sample_exact_forrelated,
    sample_gaussian_forrelated,
    sample_patterned_block,
    sample_uniform_instance,
)
from forrelab.services.forrelation.samplers import (
    default_eps,
    sample_exact_batch,
    sample_gaussian_batch,
    sample_uniform_batch,
)
from forrelab.services.forrelation.simulator import random_query_program, total_variation

BENT = TruthTable.from_string("0001")


def zero_instance() -> ForrelationInstance:
    # spectrum of 0001 is (2, 2, 2, -2); G = (1, 1, -1, 1) cancels it
    return ForrelationInstance(f=BENT, g=TruthTable.from_string("0010"), provenance=Provenance.UNIFORM)


class TestTruthTable:
    def test_packing(self):
        t = TruthTable.from_string("10110000")
        assert t.ell == 3
        assert [t[i] for i in range(8)] == [1, 0, 1, 1, 0, 0, 0, 0]
        assert t.to_string() == "10110000"
        restored, end = TruthTable.from_bytes(t.to_bytes())
        assert restored == t
        assert end == len(t.to_bytes())

    def test_shape_errors(self):
        with pytest.raises(ShapeMismatchError):
            TruthTable.from_bits([0, 1, 1])
        with pytest.raises(ShapeMismatchError):
            TruthTable(ell=3, packed=b"\x00\x00")
        with pytest.raises(ShapeMismatchError):
            ForrelationInstance(f=BENT, g=TruthTable.constant(3), provenance=Provenance.UNIFORM)

    def test_instance_block_view(self):
        inst = forrelate_table(BENT)
        assert inst.length == 8
        assert "".join(map(str, inst.bits)) == "00010001"
        assert inst.bit(3) == 1 and inst.bit(7) == 1
        again, _ = ForrelationInstance.from_bytes(inst.to_bytes())
        assert again == inst


class TestTransform:
    def test_fwht_involution(self):
        x = np.random.default_rng(0).normal(size=16)
        assert np.allclose(fwht(fwht(x)), 16 * x)

    def test_fwht_rejects_non_power_of_two(self):
        with pytest.raises(ShapeMismatchError):
            fwht(np.ones(6))

    def test_bent_function_is_fully_forrelated(self):
        assert forrelation_value(forrelate_table(BENT)) == pytest.approx(1.0)
        assert forrelation_value(zero_instance()) == pytest.approx(0.0)

    def test_worked_values(self):
        one_point = TruthTable.from_string("0")
        assert forrelation_value(ForrelationInstance(f=one_point, g=one_point, provenance=Provenance.UNIFORM)) == pytest.approx(1.0)
        inst = ForrelationInstance(
            f=TruthTable.from_string("00"), g=TruthTable.from_string("01"), provenance=Provenance.UNIFORM
        )
        assert forrelation_value(inst) == pytest.approx(0.70711, abs=1e-5)

    def test_uniform_second_moment_exact(self):
        """E[Phi^2] over all (f, g) pairs equals 2^-ell."""
        for ell in (1, 2, 3):
            tables = all_rows(1 << ell)
            f = np.repeat(tables, len(tables), axis=0)
            g = np.tile(tables, (len(tables), 1))
            assert np.mean(forrelation_values(f, g) ** 2) == pytest.approx(2.0 ** -ell)

    def test_uniform_second_moment_monte_carlo(self):
        ell, samples = 6, 4000
        rng = np.random.default_rng(1)
        f = rng.integers(0, 2, size=(samples, 1 << ell))
        g = rng.integers(0, 2, size=(samples, 1 << ell))
        phi2 = forrelation_values(f, g) ** 2
        stderr = phi2.std() / np.sqrt(samples)
        assert abs(phi2.mean() - 2.0 ** -ell) <= 3 * stderr


class TestSamplers:
    def test_provenance_labels(self):
        assert sample_uniform_instance(4, 0).provenance is Provenance.UNIFORM
        assert sample_exact_forrelated(4, 0).provenance is Provenance.EXACT_FORRELATED
        assert sample_gaussian_forrelated(4, None, 0).provenance is Provenance.GAUSSIAN_FORRELATED

    def test_reproducible(self):
        assert sample_exact_forrelated(5, 42) == sample_exact_forrelated(5, 42)

    def test_exact_forrelated_value_is_positive(self):
        for seed in range(20):
            assert forrelation_value(sample_exact_forrelated(6, seed)) > 0

    def test_patterned_block(self):
        assert sample_patterned_block(4, 0, SamplerKind.EXACT, 3).provenance is Provenance.UNIFORM
        assert sample_patterned_block(4, 1, SamplerKind.EXACT, 3).provenance.is_forrelated

    def test_batches(self):
        rng = np.random.default_rng(2)
        f, g = sample_uniform_batch(3, 5, rng)
        assert f.shape == g.shape == (5, 8)
        f, g = sample_gaussian_batch(3, 0.1, 4, rng)
        assert set(np.unique(f)) <= {0, 1}
        f, g = sample_exact_batch(5, 10, rng)
        assert (forrelation_values(f, g) > 0).all()

    def test_uniform_bit_frequencies(self):
        f, g = sample_uniform_batch(4, 100_000, np.random.default_rng(31))
        assert np.abs(f.mean(axis=0) - 0.5).max() <= 0.01
        assert np.abs(g.mean(axis=0) - 0.5).max() <= 0.01

    def test_gaussian_marginals_are_uniform(self):
        f, g = sample_gaussian_batch(4, default_eps(4), 100_000, np.random.default_rng(32))
        assert np.abs(f.mean(axis=0) - 0.5).max() <= 0.01
        assert np.abs(g.mean(axis=0) - 0.5).max() <= 0.01

    def test_gaussian_forrelation_beats_uniform(self):
        phi = forrelation_values(*sample_gaussian_batch(4, default_eps(4), 60_000, np.random.default_rng(33)))
        stderr = phi.std() / np.sqrt(phi.size)
        assert phi.mean() > 5 * stderr

    def test_vanishing_coupling_is_uniform(self):
        phi = forrelation_values(*sample_gaussian_batch(4, 1e-9, 10_000, np.random.default_rng(34)))
        assert abs(phi.mean()) <= 0.02

    def test_ell_range(self):
        with pytest.raises(DomainRangeError):
            sample_exact_forrelated(0, 0)
        with pytest.raises(DomainRangeError):
            sample_gaussian_forrelated(4, 2.0, 0)


class TestSimulatorAndDecoder:
    def test_acceptance_equals_phi_squared(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            ell = int(rng.integers(1, 7))
            inst = (sample_exact_forrelated if rng.random() < 0.5 else sample_uniform_instance)(ell, rng)
            assert acceptance_probability(inst) == pytest.approx(forrelation_value(inst) ** 2, abs=1e-9)

    def test_final_amplitude_is_phi(self):
        inst = sample_uniform_instance(4, 11)
        run = run_query_algorithm(forrelation_test_program(4), inst.bits)
        assert run.oracle_calls == 2
        assert run.amplitudes[0].real == pytest.approx(forrelation_value(inst), abs=1e-9)

    def test_bbbv_bound_holds(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            qubits = int(rng.integers(2, 6))
            program = random_query_program(qubits, int(rng.integers(1, 4)), rng)
            oracle = rng.integers(0, 2, size=1 << qubits)
            run = run_query_algorithm(program, oracle)
            flipped = rng.choice(1 << qubits, size=int(rng.integers(1, 3)), replace=False)
            changed = oracle.copy()
            changed[flipped] ^= 1
            rerun = run_query_algorithm(program, changed)
            tv = total_variation(run.probabilities(), rerun.probabilities())
            assert tv <= bbbv_bound(run, flipped) + 1e-9

    def test_query_mass_per_call(self):
        program = random_query_program(3, 2, np.random.default_rng(0))
        run = run_query_algorithm(program, np.zeros(8, dtype=np.uint8))
        assert run.total_query_mass == pytest.approx(2.0)

    def test_decoder_extremes(self):
        assert quantum_forrelation_test(forrelate_table(BENT), 64, 0.25, 0) == 1
        assert quantum_forrelation_test(zero_instance(), 64, 0.25, 0) == 0

    def test_decoder_preconditions(self):
        with pytest.raises(DomainRangeError):
            quantum_forrelation_test(zero_instance(), 0, 0.25)
        with pytest.raises(DomainRangeError):
            quantum_forrelation_test(zero_instance(), 8, 1.5)

    def test_decode_error_probability(self):
        assert decode_error_probability(1.0, 64, 0.25, 1) == pytest.approx(0.0)
        assert decode_error_probability(0.0, 64, 0.25, 0) == pytest.approx(0.0)
        assert decode_error_probability(0.25, 64, 0.25, 1) < 0.5

    def test_majority_vote_monotonicity(self):
        rng = np.random.default_rng(41)
        labelled = [(sample_uniform_instance(4, rng), 0) for _ in range(300)]
        labelled += [(sample_exact_forrelated(4, rng), 1) for _ in range(300)]

        def error_rate(repetitions: int) -> float:
            return float(np.mean([quantum_forrelation_test(inst, repetitions, 0.25, rng) != bit for inst, bit in labelled]))

        few, many = error_rate(16), error_rate(64)
        stderr = np.sqrt((few * (1 - few) + many * (1 - many)) / len(labelled))
        assert many <= few + 3 * stderr

    def test_exact_error_shrinks_with_repetitions(self):
        for p, bit in ((0.05, 0), (0.15, 0), (0.5, 1), (0.9, 1)):
            errors = [decode_error_probability(p, r, 0.25, bit) for r in (16, 64, 256)]
            assert errors[1] <= errors[0] + 1e-12
            assert errors[2] <= errors[1] + 1e-12

    def test_amplified_repetitions(self):
        assert amplified_repetitions(1e-3, 0.25) == 61
        with pytest.raises(DomainRangeError):
            amplified_repetitions(0.0, 0.25)

    def test_calibration_separates_the_means(self):
        result = calibrate_threshold(6, SamplerKind.EXACT, 500, 0)
        assert result.uniform_mean < result.threshold < result.forrelated_mean
        assert result.uniform_mean == pytest.approx(2.0 ** -6, abs=0.01)
