"""
Tests for circuit evaluation, sensitivity, block resampling and advantages.
"""
import itertools

import numpy as np
import pytest

from forrelab.core.errors import NetlistFormatError, PreconditionError, ShapeMismatchError
from forrelab.services.ac0 import (
    BernoulliRows,
    BlockMatrixShape,
    PatternedRows,
    UniformRows,
    acceptance_probability_exact,
    and_all,
    block_resample_flip_prob,
    block_resample_flip_prob_exact,
    constant,
    distinguishing_advantage,
    distinguishing_advantage_exact,
    eq3_identity_check,
    evaluate,
    expected_block_flip_prob,
    format_netlist,
    gw_reduction,
    hybrid_chain_advantages,
    load_netlist,
    or_all,
    parity_dnf,
    parse_netlist,
    phi_sign_proxy,
    random_circuit,
    sensitivity_at,
    sensitivity_tail_estimate,
    sensitivity_tail_exact,
    single_bit,
    threshold_dnf,
)
from forrelab.services.ac0.rows import all_rows


def bits(values) -> str:
    return "".join(str(int(v)) for v in values)


class TestCircuits:
    def test_builders_evaluate(self):
        assert evaluate(or_all(4), "0100") == 1
        assert evaluate(and_all(4), "1101") == 0
        assert evaluate(threshold_dnf(5, 3), "10101") == 1
        assert evaluate(threshold_dnf(5, 3), "10001") == 0
        for x in all_rows(5):
            assert evaluate(parity_dnf(5), x) == int(x.sum()) % 2

    def test_netlist_round_trip(self):
        circuit = random_circuit(6, 10, 3, np.random.default_rng(2))
        again = parse_netlist(format_netlist(circuit))
        inputs = all_rows(6)
        assert np.array_equal(circuit.evaluate_batch(inputs), again.evaluate_batch(inputs))

    def test_netlist_text(self):
        text = "INPUTS 3\ng0 AND x0 x1\ng1 NOT g0\ng2 OR g1 x2  # trailing comment\nOUTPUT g2\n"
        circuit = parse_netlist(text)
        assert circuit.num_inputs == 3
        assert evaluate(circuit, "110") == 0
        assert evaluate(circuit, "111") == 1

    def test_netlist_errors(self):
        with pytest.raises(NetlistFormatError):
            parse_netlist("INPUTS 2\ng0 XOR x0 x1\nOUTPUT g0\n")
        with pytest.raises(NetlistFormatError):
            parse_netlist("INPUTS 2\ng0 AND x0 g5\nOUTPUT g0\n")
        with pytest.raises(NetlistFormatError):
            parse_netlist("INPUTS 2\ng0 AND x0 x1\n")

    def test_unreadable_netlist_file(self, tmp_path):
        path = tmp_path / "circuit.txt"
        path.write_bytes(b"INPUTS 2\n\xff\xfe g0 AND x0 x1\n")
        with pytest.raises(PreconditionError):
            load_netlist(path)
        with pytest.raises(NetlistFormatError):
            load_netlist(tmp_path / "missing.txt")


class TestSensitivity:
    def test_parity_is_fully_sensitive(self):
        for n in range(1, 8):
            circuit = parity_dnf(n)
            for x in all_rows(n):
                assert sensitivity_at(circuit, x) == n

    def test_and_or_closed_forms(self):
        assert sensitivity_at(and_all(5), "11111") == 5
        assert sensitivity_at(and_all(5), "11011") == 1
        assert sensitivity_at(and_all(5), "10011") == 0
        assert sensitivity_at(or_all(4), "0100") == 1
        assert sensitivity_at(or_all(4), "0000") == 4

    def test_tail_exact(self):
        for n in (3, 6, 10):
            assert sensitivity_tail_exact(and_all(n), 1) == pytest.approx((n + 1) / 2 ** n)
        assert sensitivity_tail_exact(parity_dnf(6), 6) == 1.0

    def test_tail_estimate(self):
        assert sensitivity_tail_estimate(parity_dnf(5), 5, 200, 0).estimate == 1.0
        circuit = random_circuit(8, 12, 3, np.random.default_rng(4))
        tails = [sensitivity_tail_estimate(circuit, t, 2000, 9).estimate for t in range(6)]
        assert all(a >= b for a, b in zip(tails, tails[1:]))
        est = sensitivity_tail_estimate(circuit, 2, 4000, 1)
        assert abs(est.estimate - sensitivity_tail_exact(circuit, 2)) <= 3 * est.stderr + 1e-9

    def test_permutation_invariance(self):
        circuit = random_circuit(6, 10, 3, np.random.default_rng(6))
        perm = [3, 0, 5, 1, 4, 2]
        permuted = circuit.permute_inputs(perm)
        for x in all_rows(6)[::7]:
            y = np.empty_like(x)
            y[perm] = x
            assert sensitivity_at(circuit, x) == sensitivity_at(permuted, y)


class TestBlockResampling:
    def test_single_bit_closed_form(self):
        shape = BlockMatrixShape(4, 2)
        for p in (0.5, 0.3):
            dist = BernoulliRows(2, p)
            exact = expected_block_flip_prob(single_bit(8, 3), shape, dist)
            assert exact == pytest.approx(2 * p * (1 - p) / 4)

    def test_ignoring_circuit_never_flips(self):
        shape = BlockMatrixShape(3, 2)
        est = block_resample_flip_prob(constant(6, 1), shape, UniformRows(2), "101010", 500, 0)
        assert est.estimate == 0.0

    def test_estimate_matches_enumeration(self):
        shape = BlockMatrixShape(3, 2)
        dist = UniformRows(2)
        circuit = random_circuit(6, 10, 3, np.random.default_rng(1))
        x = "011010"
        est = block_resample_flip_prob(circuit, shape, dist, x, 5000, 3)
        exact = block_resample_flip_prob_exact(circuit, shape, dist, x)
        assert abs(est.estimate - exact) <= 3 * est.stderr + 1e-9

    def test_matches_direct_definition(self):
        """Enumerate every (row, replacement) pair directly."""
        shape = BlockMatrixShape(2, 3)
        dist = UniformRows(3)
        circuit = random_circuit(6, 8, 2, np.random.default_rng(3))
        x = np.array([1, 0, 0, 1, 1, 0], dtype=np.uint8)
        fx = evaluate(circuit, x)
        flips = 0
        for k, row in itertools.product(range(2), all_rows(3)):
            y = x.copy().reshape(2, 3)
            y[k] = row
            flips += evaluate(circuit, y.reshape(-1)) != fx
        direct = flips / (2 * 8)
        assert block_resample_flip_prob_exact(circuit, shape, dist, x) == pytest.approx(direct)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            block_resample_flip_prob(parity_dnf(5), BlockMatrixShape(3, 2), UniformRows(2), "000000", 10, 0)


class TestGwReduction:
    def test_equal_matrices_give_constant(self):
        shape = BlockMatrixShape(3, 2)
        circuit = random_circuit(6, 10, 3, np.random.default_rng(0))
        w = "110100"
        g = gw_reduction(circuit, shape, w, w)
        outputs = {evaluate(g, z) for z in all_rows(3)}
        assert outputs == {evaluate(circuit, w)}

    def test_preserves_function(self):
        shape = BlockMatrixShape(3, 2)
        rng = np.random.default_rng(5)
        circuit = random_circuit(6, 12, 3, rng)
        w0 = rng.integers(0, 2, 6).astype(np.uint8)
        w1 = rng.integers(0, 2, 6).astype(np.uint8)
        g = gw_reduction(circuit, shape, w0, w1)
        assert g.size <= circuit.size
        assert g.depth <= circuit.depth
        for z in all_rows(3):
            wz = np.where(np.repeat(z, 2).astype(bool), w1, w0)
            assert evaluate(g, z) == evaluate(circuit, wz)

    def test_eq3_identity(self):
        result = eq3_identity_check(random_circuit(6, 10, 3, np.random.default_rng(7)), BlockMatrixShape(3, 2))
        assert result.passed
        assert result.inputs_checked == 64


class TestAdvantage:
    def test_constant_circuit_has_no_advantage(self):
        d = distinguishing_advantage(constant(8, 1), PatternedRows("1", 2), PatternedRows("0", 2), 300, 0)
        assert d.estimate == 0.0

    def test_acceptance_exact(self):
        assert acceptance_probability_exact(or_all(3), UniformRows(3)) == pytest.approx(7 / 8)
        assert acceptance_probability_exact(and_all(2), BernoulliRows(2, 0.5)) == pytest.approx(0.25)

    def test_phi_proxy_exact(self):
        circuit = phi_sign_proxy(2)
        assert distinguishing_advantage_exact(circuit, PatternedRows("1", 2), PatternedRows("0", 2)) == pytest.approx(0.5)

    def test_phi_proxy_estimate(self):
        d = distinguishing_advantage(phi_sign_proxy(2), PatternedRows("1", 2), PatternedRows("0", 2), 2000, 1)
        assert d.contains(0.5)

    def test_hybrid_chain_telescopes(self):
        circuit = random_circuit(16, 12, 3, np.random.default_rng(9))
        chain = hybrid_chain_advantages(circuit, "00", "11", 2, 500, 0)
        assert chain.patterns == ("00", "10", "11")
        assert sum(chain.gaps) == pytest.approx(chain.total)
        assert chain.max_gap <= 1.0
