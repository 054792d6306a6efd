"""
Tests for bit helpers, seeds, statistics and settings.
"""
import numpy as np
import pytest

from forrelab.core.bits import (
    bit_at,
    bits_to_hex,
    bits_to_int,
    hex_to_bits,
    index_width,
    inner_product,
    int_to_bits,
    is_bitstring,
)
from forrelab.core.config.settings import Settings
from forrelab.core.errors import (
    AdversaryProtocolError,
    DomainRangeError,
    PreconditionError,
    QueryBudgetExceeded,
    SnapshotFormatError,
)
from forrelab.core.randomness import derive_seeds, draw_seed, keyed_seed, make_rng
from forrelab.core.stats import (
    DifferenceEstimate,
    ProportionEstimate,
    Verdict,
    check_close,
    check_lower_bound,
    check_upper_bound,
    wilson_interval,
)


class TestBits:
    def test_int_bits_layout(self):
        assert int_to_bits(5, 4) == "0101"
        assert bits_to_int("0101") == 5
        assert int_to_bits(0, 0) == ""
        assert bits_to_int("") == 0

    def test_int_to_bits_overflow(self):
        with pytest.raises(ValueError):
            int_to_bits(16, 4)

    def test_bit_at_is_msb_first(self):
        assert [bit_at(0b100, 3, i) for i in range(3)] == [1, 0, 0]

    def test_index_width(self):
        assert index_width(1) == 1
        assert index_width(6) == 3
        assert index_width(8) == 3
        assert index_width(9) == 4

    def test_inner_product(self):
        assert inner_product(0b1011, 0b0011) == 0
        assert inner_product(0b1011, 0b0010) == 1

    def test_hex(self):
        assert hex_to_bits("0xa", 6) == "001010"
        assert bits_to_hex("1010") == "a"
        with pytest.raises(DomainRangeError):
            hex_to_bits("ff", 4)
        assert is_bitstring("0110")
        assert not is_bitstring("012")

    def test_bad_hex_is_a_precondition_error(self):
        for text in ("0xg1", "12 3", "-1"):
            with pytest.raises(PreconditionError):
                hex_to_bits(text)
        assert hex_to_bits("") == ""


class TestRandomness:
    def test_derive_seeds_reproducible(self):
        a = [make_rng(s).integers(1 << 30) for s in derive_seeds(3, 4)]
        b = [make_rng(s).integers(1 << 30) for s in derive_seeds(3, 4)]
        assert a == b
        assert len(set(a)) == 4

    def test_keyed_seed_addresses(self):
        x = make_rng(keyed_seed(9, 1, 2)).integers(1 << 30)
        assert x == make_rng(keyed_seed(9, 1, 2)).integers(1 << 30)
        assert x != make_rng(keyed_seed(9, 2, 1)).integers(1 << 30)

    def test_generator_passthrough(self):
        rng = np.random.default_rng(0)
        assert make_rng(rng) is rng
        assert 0 <= draw_seed(rng) < 2 ** 63


class TestStats:
    def test_wilson_contains_estimate(self):
        low, high = wilson_interval(30, 100)
        assert low < 0.3 < high
        assert wilson_interval(0, 50)[0] == 0.0
        assert wilson_interval(50, 50)[1] == 1.0

    def test_proportion_and_difference(self):
        p = ProportionEstimate.from_counts(25, 100)
        assert p.estimate == 0.25
        assert p.stderr == pytest.approx(np.sqrt(0.25 * 0.75 / 100))
        d = DifferenceEstimate.from_counts(60, 100, 40, 100)
        assert d.estimate == pytest.approx(0.2)
        assert d.contains(0.2)
        assert not d.contains(-0.5)

    def test_three_sigma_verdicts(self):
        assert check_upper_bound(0.11, 0.01, 0.1) is Verdict.CONSISTENT
        assert check_upper_bound(0.2, 0.01, 0.1) is Verdict.INCONSISTENT
        assert check_lower_bound(0.95, 0.01, 0.97) is Verdict.CONSISTENT
        assert check_lower_bound(0.5, 0.01, 0.97) is Verdict.INCONSISTENT
        assert check_close(0.0, 0.0, 0.0) is Verdict.CONSISTENT
        assert check_close(0.1, 0.01, 0.0) is Verdict.INCONSISTENT


class TestErrorsAndSettings:
    def test_hierarchy(self):
        assert issubclass(DomainRangeError, PreconditionError)
        assert issubclass(SnapshotFormatError, PreconditionError)
        assert issubclass(QueryBudgetExceeded, AdversaryProtocolError)

    def test_settings_from_environment(self, monkeypatch):
        monkeypatch.setenv("FORRELAB_WORKERS", "4")
        monkeypatch.setenv("FORRELAB_DECODE_REPETITIONS", "32")
        s = Settings()
        assert s.workers == 4
        assert s.decode_repetitions == 32
        assert s.decode_threshold == 0.25
        assert s.query_cap_factor == 10
