"""Tests for the independent verification helpers themselves."""

from __future__ import annotations

import numpy as np
import pytest
from scipy import stats

from snth.oracle import (McEstimate, ks_test, mc_moments, mc_statistic,
                         quad_normalization, w0_reference)


class TestMcMoments:
    def test_standard_normal_moments(self):
        def sampler(n, seed):
            return np.random.default_rng(seed).standard_normal((n, 1))

        est = mc_moments(sampler, 400_000, [(1,), (2,), (4,)], seed=0)
        # true values 0, 1, 3; allow 4 CLT standard errors
        assert abs(est[(1,)].value - 0.0) < 4 * est[(1,)].stderr
        assert abs(est[(2,)].value - 1.0) < 4 * est[(2,)].stderr
        assert abs(est[(4,)].value - 3.0) < 4 * est[(4,)].stderr

    def test_chunking_is_seed_stable(self):
        def sampler(n, seed):
            return np.random.default_rng(seed).standard_normal((n, 2))

        a = mc_moments(sampler, 150_000, [(1, 1)], seed=7, chunk_size=50_000)
        b = mc_moments(sampler, 150_000, [(1, 1)], seed=7, chunk_size=50_000)
        assert a[(1, 1)].value == b[(1, 1)].value

    def test_cross_moment(self):
        def sampler(n, seed):
            rng = np.random.default_rng(seed)
            z = rng.standard_normal((n, 2))
            z[:, 1] = 0.8 * z[:, 0] + 0.6 * z[:, 1]
            return z

        est = mc_moments(sampler, 400_000, [(1, 1)], seed=3)
        assert abs(est[(1, 1)].value - 0.8) < 4 * est[(1, 1)].stderr

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            mc_moments(lambda n, s: np.zeros((n, 1)), 10, [(1,)])


class TestMcStatistic:
    def test_batch_means_cover_truth(self):
        def sampler(n, seed):
            return np.random.default_rng(seed).standard_normal((n, 1))

        est = mc_statistic(sampler, 320_000, lambda x: float(np.var(x)),
                           batches=16, seed=1)
        assert isinstance(est, McEstimate)
        assert abs(est.value - 1.0) < 4 * est.stderr
        assert est.stderr > 0


class TestQuadNormalization:
    def test_gaussian_dim1(self):
        val = quad_normalization(stats.norm.logpdf, 1, (-10.0, 10.0), 200)
        assert abs(val - 1.0) < 1e-12

    def test_gaussian_dim2(self):
        mvn = stats.multivariate_normal(mean=[0.3, -0.4],
                                        cov=[[1.0, 0.5], [0.5, 2.0]])
        val = quad_normalization(mvn.logpdf, 2,
                                 ((-12.0, 12.0), (-14.0, 14.0)), 260)
        assert abs(val - 1.0) < 1e-10

    def test_tan_map_handles_heavy_tails(self):
        # Cauchy has no moments at all; the mapped rule covers the whole
        # line, with the box setting the scale of the central nodes.
        val = quad_normalization(stats.cauchy.logpdf, 1, (-10.0, 10.0), 800,
                                 tan_map=True)
        assert abs(val - 1.0) < 1e-8


class TestW0Reference:
    def test_agrees_with_scipy_lambertw(self):
        from scipy.special import lambertw
        for x in (1e-6, 0.5, 1.0, 20.0, 1e4):
            assert abs(w0_reference(x) - float(lambertw(x).real)) < 1e-12


class TestKsTest:
    def test_one_sample_null_is_large(self):
        x = np.random.default_rng(0).standard_normal(2000)
        assert ks_test(x, stats.norm.cdf) > 0.05

    def test_one_sample_alternative_is_tiny(self):
        x = np.random.default_rng(0).standard_normal(2000) + 0.5
        assert ks_test(x, stats.norm.cdf) < 1e-10

    def test_two_sample(self):
        rng = np.random.default_rng(5)
        assert ks_test(rng.standard_normal(800),
                       rng.standard_normal(800)) > 0.05

    def test_needs_enough_observations(self):
        with pytest.raises(ValueError):
            ks_test(np.zeros(5), stats.norm.cdf)
