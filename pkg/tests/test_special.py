"""Tests for the scalar special functions and transforms."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import stats

from snth.oracle import w0_reference
from snth.special import (Accuracy, inv_tukey_h, lambert_w0, mvn_cdf,
                          truncated_normal_moments, tukey_h, zeta1)


class TestLambertW0:
    def test_known_values(self):
        # W(1) is the omega constant; W(10) cross-checked against the
        # bisection reference and scipy.special.lambertw.
        assert lambert_w0(0.0) == 0.0
        assert np.isclose(lambert_w0(1.0), 0.5671432904097838, atol=1e-14)
        assert np.isclose(lambert_w0(10.0), 1.7455280027406994, atol=1e-14)

    def test_defining_identity_on_log_grid(self):
        x = np.logspace(-12, 12, 121)
        w = lambert_w0(x)
        assert np.allclose(w * np.exp(w), x, rtol=1e-12)

    def test_matches_bisection_reference(self):
        for x in np.logspace(-8, 8, 33):
            assert abs(lambert_w0(float(x)) - w0_reference(float(x))) < 1e-10

    def test_rejects_negative_arguments(self):
        with pytest.raises(ValueError):
            lambert_w0(-0.1)

    def test_vectorized_shape(self):
        x = np.arange(12, dtype=float).reshape(3, 4)
        assert lambert_w0(x).shape == (3, 4)

    @given(st.floats(min_value=1e-300, max_value=1e300))
    @settings(max_examples=200, deadline=None)
    def test_roundtrip_w_exp_w(self, x):
        w = lambert_w0(x)
        assert np.isclose(w * np.exp(w), x, rtol=1e-11)


class TestTukeyTransform:
    def test_known_value(self):
        # 2 * exp(0.1 * 4 / 2) = 2 e^{0.2}
        assert np.isclose(tukey_h(2.0, 0.1), 2.4428055163203397, atol=1e-15)

    def test_h_zero_is_identity(self):
        x = np.linspace(-5, 5, 11)
        assert np.array_equal(tukey_h(x, 0.0), x)
        assert np.array_equal(inv_tukey_h(x, 0.0), x)

    def test_oddness_and_monotonicity(self):
        x = np.linspace(-4, 4, 101)
        z = tukey_h(x, 0.15)
        assert np.allclose(z + tukey_h(-x, 0.15), 0.0, atol=1e-15)
        assert np.all(np.diff(z) > 0)

    def test_inverse_roundtrip_fixed_grid(self):
        x = np.linspace(-6, 6, 121)
        for h in (0.0, 0.01, 0.1, 0.3, 0.9):
            assert np.allclose(inv_tukey_h(tukey_h(x, h), h), x, atol=1e-12)

    @given(st.floats(min_value=-30, max_value=30),
           st.floats(min_value=0, max_value=1.0))
    @settings(max_examples=300, deadline=None)
    def test_roundtrip_property(self, x, h):
        # keep tukey_h(x, h)^2 representable; past that the inverse
        # overflows by float saturation, not by algorithm error
        assume(h * x * x <= 500.0)
        z = tukey_h(x, h)
        back = inv_tukey_h(z, h)
        assert np.isclose(back, x, rtol=1e-10, atol=1e-10)


class TestZeta1:
    def test_matches_normal_hazard(self):
        t = np.linspace(-8, 8, 33)
        ref = stats.norm.pdf(t) / stats.norm.cdf(t)
        assert np.allclose(zeta1(t), ref, rtol=1e-12)

    def test_deep_negative_tail_stays_finite(self):
        # phi/Phi underflows naively near t = -40; the erfcx form does not
        assert np.isclose(zeta1(-40.0), 40.02496884720727, rtol=1e-13)
        assert np.isfinite(zeta1(-300.0))

    def test_positive_tail_decays(self):
        assert zeta1(40.0) < 1e-100


class TestTruncatedNormalMoments:
    def test_alpha_zero_reduces_to_scalar_formulas(self):
        # With alpha_sq = 0: E U = tau + zeta1(tau), E U^2 = 1 + tau^2
        # + tau zeta1(tau); values pinned at tau = 1.5.
        v1, v2 = truncated_normal_moments(1.5, 0.0)
        assert np.isclose(v1, 1.638789750458851, atol=1e-14)
        assert np.isclose(v2, 3.4581846256882764, atol=1e-14)

    def test_scaling_by_alpha(self):
        v1, v2 = truncated_normal_moments(-2.0, 3.0)
        w1, w2 = truncated_normal_moments(-2.0, 0.0)
        assert np.isclose(v1, w1 / 2.0, rtol=1e-13)
        assert np.isclose(v2, w2 / 4.0, rtol=1e-13)

    def test_monte_carlo_agreement(self):
        # U =d (tau + Z | Z + tau > 0) / sqrt(1 + alpha^2); rejection
        # draws with seed 42, checked within 5 CLT standard errors.
        tau, alpha_sq = 0.8, 1.5
        rng = np.random.default_rng(42)
        z = rng.standard_normal(4_000_000)
        u = (tau + z[z + tau > 0]) / np.sqrt(1.0 + alpha_sq)
        v1, v2 = truncated_normal_moments(tau, alpha_sq)
        se1 = u.std() / np.sqrt(u.size)
        se2 = (u ** 2).std() / np.sqrt(u.size)
        assert abs(u.mean() - v1) < 5 * se1
        assert abs((u ** 2).mean() - v2) < 5 * se2


class TestMvnCdf:
    def test_univariate_matches_ndtr(self):
        assert np.isclose(mvn_cdf(np.array([0.7]), np.zeros(1), np.eye(1)),
                          stats.norm.cdf(0.7), atol=1e-14)

    def test_bivariate_independent_factorizes(self):
        val = mvn_cdf(np.array([0.5, -0.3]), np.zeros(2), np.eye(2))
        ref = stats.norm.cdf(0.5) * stats.norm.cdf(-0.3)
        assert np.isclose(val, ref, atol=1e-9)

    def test_trivariate_quasi_monte_carlo(self):
        # scipy's own mvn integrator gives 0.2783486738 for this case;
        # the QMC path must land within its stated tolerance.
        cov = np.array([[1.0, 0.3, -0.2], [0.3, 1.0, 0.5],
                        [-0.2, 0.5, 1.0]])
        pt = np.array([0.4, -0.3, 1.1])
        val = mvn_cdf(pt, np.zeros(3), cov, Accuracy(abs_tol=1e-6))
        assert abs(val - 0.2783486738308703) < 1e-5

    def test_symmetry_at_origin(self):
        cov = np.array([[1.0, 0.6], [0.6, 1.0]])
        val = mvn_cdf(np.zeros(2), np.zeros(2), cov)
        # P(Z1<0, Z2<0) = 1/4 + arcsin(rho)/(2 pi) for standard bivariate
        ref = 0.25 + np.arcsin(0.6) / (2 * np.pi)
        assert np.isclose(val, ref, atol=1e-9)
