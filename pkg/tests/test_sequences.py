import math

import pytest
from hypothesis import given, strategies as st

from muntzlab.sequences import (ExponentSequence, classify,
                                decompose_quasi_lacunary, generate_geometric,
                                generate_recursive_power, is_r_lacunary)


class TestExponentSequence:
    def test_validation(self):
        with pytest.raises(ValueError):
            ExponentSequence(())
        with pytest.raises(ValueError):
            ExponentSequence((1.0, 1.0))
        with pytest.raises(ValueError):
            ExponentSequence((2.0, 1.0))
        with pytest.raises(ValueError):
            ExponentSequence((-1.0, 2.0))
        with pytest.raises(ValueError):
            ExponentSequence((0.0, math.inf))

    def test_gap(self):
        assert ExponentSequence((1.0, 3.0, 4.0)).gap == 1.0
        assert ExponentSequence((5.0,)).gap == math.inf

    def test_prefix(self):
        seq = generate_geometric(1, 2, 8)
        assert seq.prefix(3).exponents == (1.0, 2.0, 4.0)
        with pytest.raises(ValueError):
            seq.prefix(0)


class TestGenerators:
    def test_geometric_direct_powers(self):
        assert generate_geometric(1, 2, 4).exponents == (1.0, 2.0, 4.0, 8.0)
        assert generate_geometric(1000, 300, 3).exponents == (1000.0, 300000.0, 9e7)

    def test_geometric_rejects_bad_args(self):
        with pytest.raises(ValueError):
            generate_geometric(0.5, 1, 3)
        with pytest.raises(ValueError):
            generate_geometric(-1, 2, 3)
        with pytest.raises(ValueError):
            generate_geometric(1, 2, 0)

    def test_geometric_overflow_truncates(self):
        seq = generate_geometric(1, 10, 400)
        assert seq.truncated and len(seq) < 400
        assert seq.requested_count == 400

    def test_recursive_power_unrolled(self):
        assert generate_recursive_power(1, 2, 2, 4).exponents == (1.0, 9.0, 144.0, 3600.0)
        assert generate_recursive_power(1, 2, 4, 3).exponents == (1.0, 81.0, 20736.0)

    def test_recursive_power_ratios_exact(self):
        seq = generate_recursive_power(1.5, 3, 2.5, 6)
        for i in range(1, len(seq)):
            n = 3 + i
            assert seq[i] / seq[i - 1] == pytest.approx(n ** 2.5, rel=1e-15)

    def test_recursive_power_truncates_with_report(self):
        seq = generate_recursive_power(1, 2, 6, 400)
        assert seq.truncated
        assert seq.exponents[-1] <= 1e306

    @given(st.floats(min_value=0.1, max_value=100.0),
           st.floats(min_value=1.1, max_value=10.0),
           st.integers(min_value=1, max_value=40))
    def test_geometric_ratio_recovered(self, lam0, r, count):
        seq = generate_geometric(lam0, r, count)
        if len(seq) >= 2:
            cls = classify(seq)
            assert cls.r_inf == pytest.approx(r, rel=1e-15)


class TestClassify:
    def test_constant_ratio(self):
        cls = classify(generate_geometric(1, 2, 4))
        assert cls.r_inf == 2.0 and cls.r_sup == 2.0
        assert cls.is_lacunary and cls.is_quasi_geometric

    def test_squares_prefix_lacunary_trend_down(self):
        cls = classify(ExponentSequence((1.0, 4.0, 9.0, 16.0, 25.0)))
        assert cls.super_lacunary_trend == (4.0, 2.25, 16.0 / 9.0, 25.0 / 16.0)
        assert cls.r_inf == pytest.approx(1.5625)
        assert cls.is_lacunary
        assert "trend non-lacunary" in cls.trend_note

    def test_super_lacunary_trend_up(self):
        seq = generate_recursive_power(1, 2, 2, 6)  # ratios n^2 increase
        cls = classify(seq)
        assert all(b > a for a, b in zip(cls.super_lacunary_trend,
                                         cls.super_lacunary_trend[1:]))
        assert "super-lacunary" in cls.trend_note

    def test_leading_zero_flagged(self):
        cls = classify(ExponentSequence((0.0, 1.0, 2.0)))
        assert cls.ratios_from_index == 1
        assert cls.r_inf == 2.0

    def test_too_short(self):
        with pytest.raises(ValueError):
            classify(ExponentSequence((1.0,)))
        with pytest.raises(ValueError):
            classify(ExponentSequence((0.0, 1.0)))

    def test_invariants(self):
        cls = classify(ExponentSequence((1.0, 1.5, 6.0)))
        assert cls.r_inf <= cls.r_sup


class TestDecompose:
    def test_two_geometric_strands(self):
        merged = ExponentSequence((1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0))
        parts = decompose_quasi_lacunary(merged, 2.0)
        assert [p.exponents for p in parts] == [
            (1.0, 2.0, 4.0, 8.0, 16.0), (3.0, 6.0, 12.0, 24.0)]

    def test_already_lacunary_single_part(self):
        seq = generate_geometric(1, 2, 4)
        parts = decompose_quasi_lacunary(seq, 2.0)
        assert len(parts) == 1 and parts[0].exponents == seq.exponents

    def test_dense_all_singletons(self):
        parts = decompose_quasi_lacunary(ExponentSequence((1.0, 1.1, 1.2)), 2.0)
        assert [len(p) for p in parts] == [1, 1, 1]

    def test_rejects_small_ratio(self):
        with pytest.raises(ValueError):
            decompose_quasi_lacunary(generate_geometric(1, 2, 4), 1.0)

    @given(st.lists(st.floats(min_value=0.01, max_value=1e6), min_size=1,
                    max_size=25, unique=True),
           st.floats(min_value=1.1, max_value=4.0))
    def test_partition_properties(self, values, r):
        seq = ExponentSequence(tuple(sorted(values)))
        parts = decompose_quasi_lacunary(seq, r)
        rebuilt = sorted(v for p in parts for v in p)
        assert rebuilt == list(seq.exponents)
        for p in parts:
            assert is_r_lacunary(p.exponents, r, rel_slack=1e-12)
