import math

import numpy as np
import pytest

from muntzlab.hilbert import (ConditioningError, build_gram_pair,
                              build_t_mu_matrix, cholesky_lower,
                              embedding_spectrum, essential_norm_estimate,
                              frame_bounds, hs_criteria, point_eval_kernel,
                              prop511_value, symmetric_eigen, t_mu_spectrum)
from muntzlab.measures import Lebesgue, atoms, poisson_integral, restrict
from muntzlab.sequences import ExponentSequence, generate_geometric

GEO = generate_geometric(1, 2, 24)
PAIR_SEQ = ExponentSequence((1.0, 2.0))
GEOM_ATOMS = atoms([(2.0 ** -k, 4.0 ** -k) for k in range(1, 31)])


class TestSymmetricEigen:
    def test_diagonal(self):
        vals, vecs = symmetric_eigen(np.diag([1.0, 2.0]))
        assert vals.tolist() == [2.0, 1.0]
        assert np.allclose(abs(vecs), [[0, 1], [1, 0]])

    def test_rank_one(self):
        vals, _ = symmetric_eigen(np.ones((2, 2)))
        assert vals.tolist() == pytest.approx([2.0, 0.0], abs=1e-15)

    def test_cross_oracle_psd_factor(self):
        rng = np.random.default_rng(3)
        b = rng.normal(size=(8, 8))
        vals, vecs = symmetric_eigen(b @ b.T)
        oracle = np.sort(np.linalg.svd(b, compute_uv=False))[::-1] ** 2
        assert np.max(np.abs(vals - oracle)) < 1e-9

    def test_reconstruction(self):
        rng = np.random.default_rng(5)
        a = rng.normal(size=(10, 10))
        a = a + a.T
        vals, vecs = symmetric_eigen(a)
        err = np.linalg.norm(a - vecs @ np.diag(vals) @ vecs.T)
        assert err <= 1e-10 * np.linalg.norm(a)
        assert np.allclose(vecs @ vecs.T, np.eye(10), atol=1e-12)

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            symmetric_eigen(np.array([[1.0, 2.0], [0.5, 1.0]]))

    def test_psd_clamp_and_reject(self):
        vals, _ = symmetric_eigen(np.diag([1.0, -1e-15]), psd=True)
        assert vals[-1] == 0.0
        with pytest.raises(ValueError):
            symmetric_eigen(np.diag([1.0, -0.5]), psd=True)

    def test_deterministic(self):
        rng = np.random.default_rng(11)
        a = rng.normal(size=(6, 6))
        a = a + a.T
        v1, _ = symmetric_eigen(a.copy())
        v2, _ = symmetric_eigen(a.copy())
        assert v1.tolist() == v2.tolist()


class TestCholesky:
    def test_matches_numpy(self):
        lam = np.array(GEO.exponents[:8])
        g = 1.0 / (lam[:, None] + lam[None, :] + 1.0)
        low = cholesky_lower(g)
        assert np.allclose(low, np.linalg.cholesky(g), atol=1e-14)

    def test_pivot_failure_names_index(self):
        dense = ExponentSequence(tuple(1.0 + k * 1e-6 for k in range(24)))
        pair = build_gram_pair(dense, Lebesgue(), 24)
        with pytest.raises(ConditioningError) as err:
            cholesky_lower(pair.g_ref)
        assert 0 < err.value.pivot < 24


class TestMatrices:
    def test_t_mu_lebesgue_2x2(self):
        m, flushed = build_t_mu_matrix(PAIR_SEQ, Lebesgue(), 2)
        expect = np.array([[1 / 3, math.sqrt(2) / 4], [math.sqrt(2) / 4, 2 / 5]])
        assert np.allclose(m, expect, atol=1e-15)
        assert flushed == 0

    def test_row_sums_are_squared_profile(self):
        from muntzlab.dnp import WeightScheme, compute_dn
        mu = atoms([(0.5, 1.0), (0.2, 0.5)])
        n = 10
        m, _ = build_t_mu_matrix(GEO, mu, n)
        # profile restricted to the same inner range as the matrix
        prof = compute_dn(GEO.prefix(n), mu, WeightScheme("inverse_lambda", 2.0))
        for i in range(n):
            assert m[i].sum() == pytest.approx(prof.values[i] ** 2, rel=1e-10)

    def test_single_atom_rank_one(self):
        m, _ = build_t_mu_matrix(GEO, atoms([(0.5, 1.0)]), 6)
        assert np.linalg.matrix_rank(m, tol=1e-12) == 1

    def test_rejects_zero_first_exponent(self):
        seq = ExponentSequence((0.0, 1.0, 2.0))
        with pytest.raises(ValueError):
            build_t_mu_matrix(seq, Lebesgue(), 3)

    def test_gram_pair_diagonal(self):
        pair = build_gram_pair(GEO, Lebesgue(), 5)
        for i in range(5):
            assert pair.g_ref[i, i] == pytest.approx(1.0 / (2 * GEO[i] + 1))
        assert np.allclose(pair.g_ref, pair.g_mu, atol=1e-15)

    def test_flush_counting(self):
        # 0.5**(2*lam) underflows past the materialization floor for lam ~ 2^12
        seq = generate_geometric(1024, 2, 4)
        m, flushed = build_t_mu_matrix(seq, atoms([(0.5, 1.0)]), 4)
        assert flushed > 0
        assert m[3, 3] == 0.0


class TestEmbeddingSpectrum:
    def test_identity_for_lebesgue(self):
        spec = embedding_spectrum(GEO, Lebesgue(), 16)
        assert max(abs(s - 1.0) for s in spec.singular_values) < 1e-8

    def test_scaled_lebesgue_scales_sigmas(self):
        from muntzlab.measures import DensityMeasure
        spec = embedding_spectrum(GEO, DensityMeasure("uniform", scale=0.5), 8)
        assert max(abs(s - math.sqrt(0.5)) for s in spec.singular_values) < 1e-7

    def test_scaling_law(self):
        mu1 = atoms([(0.5, 1.0), (0.25, 0.5)])
        mu4 = atoms([(0.5, 4.0), (0.25, 2.0)])
        s1 = embedding_spectrum(GEO, mu1, 8).singular_values
        s4 = embedding_spectrum(GEO, mu4, 8).singular_values
        for a, b in zip(s1, s4):
            assert b == pytest.approx(2.0 * a, rel=1e-9, abs=1e-12)

    def test_single_atom_kernel_identity(self):
        mass = 2.0
        mu = atoms([(0.5, mass)])
        spec = embedding_spectrum(GEO, mu, 16)
        kernel = point_eval_kernel(GEO, 16, delta=0.5)
        assert spec.singular_values[0] ** 2 == pytest.approx(
            mass * kernel ** 2, rel=1e-9)
        assert spec.singular_values[1] <= 1e-6 * spec.singular_values[0]

    def test_empty_restriction_all_zero(self):
        empty = restrict(atoms([(0.5, 1.0)]), 0.6, 1.0)
        spec = embedding_spectrum(GEO, empty, 6)
        assert all(s == 0.0 for s in spec.singular_values)

    def test_drift_reported(self):
        spec = embedding_spectrum(GEO, GEOM_ATOMS, 16)
        assert {"sigma1", "sigma1_half", "hs", "hs_half"} <= set(spec.drift)


class TestTMuSpectrum:
    def test_2x2_closed_form(self):
        spec = t_mu_spectrum(PAIR_SEQ, Lebesgue(), 2)
        tr, det = 11.0 / 15.0, 1.0 / 120.0
        disc = math.sqrt(tr * tr - 4.0 * det)
        expect = [(tr + disc) / 2.0, (tr - disc) / 2.0]
        got = [s * s for s in spec.singular_values]
        assert got == pytest.approx(expect, rel=1e-12)
        assert spec.schatten[2.0] == pytest.approx(math.sqrt(tr), rel=1e-12)

    def test_trace_identity(self):
        spec = t_mu_spectrum(GEO, GEOM_ATOMS, 12)
        hs_sq = sum(s * s for s in spec.singular_values)
        assert hs_sq == pytest.approx(spec.extras["trace"], rel=1e-10)

    def test_chain_on_seeded_measures(self):
        rng = np.random.default_rng(123)
        for _ in range(5):
            k = int(rng.integers(1, 9))
            mu = atoms([(d, m) for d, m in zip(
                rng.uniform(0.02, 0.95, k), rng.uniform(0.1, 2.0, k))])
            spec = t_mu_spectrum(GEO, mu, 10)
            assert spec.extras["chain_ok"]

    def test_empty_measure_zero(self):
        empty = restrict(atoms([(0.5, 1.0)]), 0.6, 1.0)
        spec = t_mu_spectrum(GEO, empty, 4)
        assert all(s == 0.0 for s in spec.singular_values)


class TestFrameBounds:
    def test_single_vector(self):
        fb = frame_bounds(GEO, 1)
        assert fb.sigma_min == fb.sigma_max == pytest.approx(1.0)

    def test_large_ratio_near_isometry(self):
        fb = frame_bounds(generate_geometric(1000, 300, 8), 8)
        assert 0.5 <= fb.sigma_min <= fb.sigma_max <= 1.5

    def test_interlacing_widens_with_n(self):
        prev = None
        for n in (2, 4, 8, 16):
            fb = frame_bounds(GEO, n)
            if prev is not None:
                assert fb.sigma_min <= prev.sigma_min + 1e-12
                assert fb.sigma_max >= prev.sigma_max - 1e-12
            prev = fb

    def test_super_lacunary_tails_tighten(self):
        lam = tuple(2.0 ** (n * n) for n in range(10))
        full = ExponentSequence(lam)
        shifted = ExponentSequence(lam[2:])
        dev_full = max(abs(frame_bounds(full, 8).sigma_min - 1.0),
                       abs(frame_bounds(full, 8).sigma_max - 1.0))
        dev_shift = max(abs(frame_bounds(shifted, 8).sigma_min - 1.0),
                        abs(frame_bounds(shifted, 8).sigma_max - 1.0))
        assert dev_shift < dev_full


class TestEssentialNorm:
    def test_finite_support_hits_zero(self):
        mu = atoms([(0.5, 1.0), (0.3, 2.0)])
        trend = essential_norm_estimate(GEO, mu, 8, [0.2, 0.6, 0.9])
        assert trend.sigma1[-1] == 0.0
        assert trend.limit_proxy == 0.0

    def test_requires_increasing_cuts(self):
        with pytest.raises(ValueError):
            essential_norm_estimate(GEO, GEOM_ATOMS, 8, [0.5, 0.5])

    def test_vanishing_vs_steady(self):
        cuts = [1.0 - 2.0 ** -j for j in range(1, 9)]
        van = essential_norm_estimate(GEO, GEOM_ATOMS, 12, cuts)
        steady = essential_norm_estimate(
            GEO, atoms([(2.0 ** -k, 2.0 ** -k) for k in range(1, 31)]), 12, cuts)
        assert van.drop_factor > steady.drop_factor


class TestHsCriteria:
    def test_fubini_identity(self):
        got = prop511_value(GEOM_ATOMS, 2.0)
        pois = poisson_integral(GEOM_ATOMS).value.to_float()
        assert got ** 2 == pytest.approx(pois, abs=1e-8)

    def test_report_fields(self):
        rep = hs_criteria(GEO, GEOM_ATOMS, 12, q_values=(2.0, 4.0))
        assert not rep.poisson_divergent
        assert rep.poisson_value == pytest.approx(1.0, abs=1e-6)
        assert rep.hs_embedding > rep.hs_synthesis > 0.0
        assert rep.ratios["kernel2_sq_over_poisson"] == pytest.approx(1.0, abs=1e-6)

    def test_divergent_note_for_lebesgue(self):
        rep = hs_criteria(GEO, Lebesgue(), 8)
        assert rep.poisson_divergent
        assert rep.expected_divergent_note is not None

    def test_lebesgue_hs_grows_with_truncation(self):
        h1 = embedding_spectrum(GEO, Lebesgue(), 4).schatten[2.0]
        h2 = embedding_spectrum(GEO, Lebesgue(), 8).schatten[2.0]
        h3 = embedding_spectrum(GEO, Lebesgue(), 16).schatten[2.0]
        assert h1 < h2 < h3
