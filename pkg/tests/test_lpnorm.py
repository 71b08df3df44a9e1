import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from muntzlab.lpnorm import (MuntzPolynomial, amgm_probe, eval_poly,
                             gm_ratio_sample, l2_norm_gram, lp_norm,
                             pairing_integral)
from muntzlab.measures import Lebesgue, atoms, restrict
from muntzlab.sequences import ExponentSequence, generate_geometric

GEO = generate_geometric(1, 2, 16)


class TestEval:
    def test_single_monomial(self):
        f = MuntzPolynomial(ExponentSequence((3.0,)), (1.0,))
        assert eval_poly(f, 0.5) == pytest.approx(0.125)

    def test_signed_pair(self):
        f = MuntzPolynomial(ExponentSequence((1.0, 2.0)), (1.0, -1.0))
        assert eval_poly(f, 0.5) == pytest.approx(0.25)

    def test_constant_term_at_zero(self):
        f = MuntzPolynomial(ExponentSequence((0.0, 1.0)), (3.0, 5.0))
        assert eval_poly(f, 0.0) == 3.0

    def test_rejects_t_out_of_range(self):
        f = MuntzPolynomial(ExponentSequence((1.0,)), (1.0,))
        with pytest.raises(ValueError):
            eval_poly(f, 1.0)

    def test_coefficient_validation(self):
        with pytest.raises(ValueError):
            MuntzPolynomial(GEO, ())
        with pytest.raises(ValueError):
            MuntzPolynomial(ExponentSequence((1.0,)), (1.0, 2.0))


class TestLpNorm:
    def test_t_minus_t2_l2(self):
        f = MuntzPolynomial(ExponentSequence((1.0, 2.0)), (1.0, -1.0))
        assert lp_norm(f, Lebesgue(), 2.0) == pytest.approx(
            math.sqrt(1.0 / 30.0), rel=1e-12)

    @pytest.mark.parametrize("p", [1.0, 2.0, 3.5])
    @pytest.mark.parametrize("lam", [1.0, 32.0, 1000.0])
    def test_monomial_norm_closed_form(self, p, lam):
        f = MuntzPolynomial(ExponentSequence((lam,)), (1.0,))
        assert lp_norm(f, Lebesgue(), p) == pytest.approx(
            (p * lam + 1.0) ** (-1.0 / p), rel=1e-11)

    def test_atomic_exact(self):
        mu = atoms([(0.5, 2.0), (0.25, 1.0)])
        f = MuntzPolynomial(ExponentSequence((1.0, 2.0)), (1.0, -1.0))
        direct = (2.0 * abs(0.5 - 0.25) ** 3 + 1.0 * abs(0.75 - 0.5625) ** 3) ** (1 / 3)
        assert lp_norm(f, mu, 3.0) == pytest.approx(direct, rel=1e-14)

    def test_gram_route_agrees(self):
        rng = np.random.default_rng(9)
        seq = generate_geometric(1, 2, 10)
        for _ in range(20):
            f = MuntzPolynomial(seq, tuple(rng.uniform(-1, 1, 10)))
            quad = lp_norm(f, Lebesgue(), 2.0)
            gram = l2_norm_gram(f)
            assert quad == pytest.approx(gram, rel=1e-10)

    def test_refuses_monster_exponents_on_lebesgue(self):
        f = MuntzPolynomial(ExponentSequence((1e13,)), (1.0,))
        with pytest.raises(ValueError):
            lp_norm(f, Lebesgue(), 2.0)
        # the same polynomial against atoms stays exact
        assert lp_norm(f, atoms([(0.5, 1.0)]), 2.0) > 0.0

    @given(st.floats(min_value=-100.0, max_value=100.0))
    @settings(max_examples=30)
    def test_homogeneity(self, c):
        f = MuntzPolynomial(ExponentSequence((1.0, 2.0, 4.0)), (0.3, -1.0, 0.5))
        fc = MuntzPolynomial(ExponentSequence((1.0, 2.0, 4.0)),
                             tuple(c * v for v in f.coefficients))
        assert lp_norm(fc, Lebesgue(), 2.0) == pytest.approx(
            abs(c) * lp_norm(f, Lebesgue(), 2.0), rel=1e-12, abs=1e-12)

    def test_monotone_under_restriction(self):
        mu = atoms([(0.7, 1.0), (0.2, 2.0)])
        f = MuntzPolynomial(ExponentSequence((1.0, 2.0)), (1.0, 1.0))
        assert lp_norm(f, restrict(mu, 0.5, 1.0), 2.0) <= lp_norm(f, mu, 2.0)


class TestRatioSample:
    def test_canonical_vectors_ratio_one(self):
        res = gm_ratio_sample(GEO, 2.0, trials=0)
        assert res.min_ratio == pytest.approx(1.0, abs=1e-12)
        assert res.max_ratio == pytest.approx(1.0, abs=1e-12)

    def test_large_ratio_bracket(self):
        seq = generate_geometric(1000, 300, 8)
        res = gm_ratio_sample(seq, 2.0, trials=200, seed=1)
        assert 0.5 <= res.min_ratio <= res.max_ratio <= 1.5

    def test_p1_upper_ratio_at_most_one(self):
        res = gm_ratio_sample(GEO, 1.0, trials=50, seed=2, n_count=6)
        assert res.max_ratio <= 1.0 + 1e-9

    def test_warns_on_non_lacunary(self):
        seq = ExponentSequence((1.0, 1.1, 1.2, 1.3))
        with pytest.warns(UserWarning):
            gm_ratio_sample(seq, 2.0, trials=1, seed=0)

    def test_reproducible(self):
        a = gm_ratio_sample(GEO, 2.0, trials=25, seed=7)
        b = gm_ratio_sample(GEO, 2.0, trials=25, seed=7)
        assert (a.min_ratio, a.max_ratio) == (b.min_ratio, b.max_ratio)


class TestAmgmProbe:
    def test_arithmetic_block_values(self):
        seq = ExponentSequence((1.0, 2.0, 3.0, 4.0))
        probe = amgm_probe(seq, 2.0, 0, 4)
        assert probe.norm_lower_bound == pytest.approx(64.0 / 24.0, rel=1e-15)
        assert probe.coeff_norm == pytest.approx(0.8873001675315898, rel=1e-12)

    def test_single_monomial_ratio_one(self):
        probe = amgm_probe(GEO, 2.0, 3, 1)
        # lower bound = 1/q_3 = ||1_A||^p, so the ratio collapses to 1
        q3 = 2.0 * GEO[3] + 1.0
        assert probe.norm_lower_bound == pytest.approx(1.0 / q3, rel=1e-15)
        assert probe.ratio == pytest.approx(1.0, rel=1e-13)

    def test_growth_along_arithmetic(self):
        seq = ExponentSequence(tuple(float(j + 1) for j in range(64)))
        ratios = [amgm_probe(seq, 2.0, 0, n).ratio for n in (4, 8, 16, 32, 64)]
        assert all(b > a for a, b in zip(ratios, ratios[1:]))

    def test_bounded_along_geometric(self):
        ratios = [amgm_probe(GEO, 2.0, 0, n).ratio for n in (2, 4, 8, 16)]
        assert max(ratios) < 2.0

    def test_block_validation(self):
        with pytest.raises(ValueError):
            amgm_probe(GEO, 2.0, 14, 4)


class TestPairing:
    def test_exact_small_case(self):
        value, bound = pairing_integral(ExponentSequence((1.0, 2.0)), 2.0, 0)
        assert value == pytest.approx(math.sqrt(15.0) / 4.0, rel=1e-14)
        assert bound == pytest.approx(0.6)

    def test_value_matches_brute_integral(self):
        # f_{n+1} f_n^{p-1} has an elementary antiderivative; compare p = 3
        seq = ExponentSequence((2.0, 5.0))
        p = 3.0
        value, _ = pairing_integral(seq, p, 0)
        q0, q1 = p * 2.0 + 1.0, p * 5.0 + 1.0
        brute = q1 ** (1 / p) * q0 ** (1 - 1 / p) / ((p - 1) * 2.0 + 5.0 + 1.0)
        assert value == pytest.approx(brute, rel=1e-15)

    def test_super_lacunary_decays(self):
        seq = ExponentSequence(tuple(2.0 ** (n * n) for n in range(8)))
        vals = [pairing_integral(seq, 2.0, n)[0] for n in range(7)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 0.05

    def test_geometric_stays_above_bound(self):
        for n in range(13):
            value, bound = pairing_integral(generate_geometric(1, 2, 14), 2.0, n)
            assert value >= bound >= 0.45

    @given(st.floats(min_value=1.0, max_value=6.0), st.integers(0, 10))
    @settings(max_examples=40)
    def test_value_at_least_bound(self, p, n):
        seq = generate_geometric(0.5, 1.7, 12)
        value, bound = pairing_integral(seq, p, n)
        assert value >= bound - 1e-12
