"""Scalar special functions and the multivariate normal CDF.

These are the numerical kernels the rest of the package builds on: the
principal branch of the Lambert W function, the Tukey-h transform and
its closed-form inverse, a multivariate Gaussian CDF (deterministic in
dimensions one and two, randomized quasi Monte Carlo above that), and
the first two moments of a lower-truncated standard normal.

Everything here is a pure function of its arguments.  The QMC path of
:func:`mvn_cdf` derives its point set from the seed carried in
:class:`Accuracy`, never from shared mutable state, so all routines are
safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy import special as sc
from scipy.stats import qmc

from ._linalg import chol_pd

__all__ = [
    "Accuracy",
    "lambert_w0",
    "tukey_h",
    "inv_tukey_h",
    "mvn_cdf",
    "truncated_normal_moments",
    "zeta1",
]

_SQRT2 = np.sqrt(2.0)
_SQRT_2_OVER_PI = np.sqrt(2.0 / np.pi)
_W0_TOL = 1e-12
_QMC_BATCHES = 8


@dataclass(frozen=True)
class Accuracy:
    """Tolerance and effort knobs for the numerical routines.

    Attributes
    ----------
    abs_tol : float
        Target absolute error; :func:`mvn_cdf` keeps doubling its point
        set until the reported standard error is at or below this.
    max_iter : int
        Number of doubling rounds allowed in the QMC loop.
    qmc_samples : int
        Total points in the first QMC round (split over 8 scrambled
        batches).
    seed : int
        Seed for the scrambled Sobol point sets.
    """

    abs_tol: float = 1e-6
    max_iter: int = 10
    qmc_samples: int = 8192
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.qmc_samples < 1:
            raise ValueError("qmc_samples must be at least 1")


DEFAULT_ACCURACY = Accuracy()


def _w0_start(x: np.ndarray) -> np.ndarray:
    # Series near zero, Winitzki's log-based form elsewhere; either is
    # within a few percent, which Halley polishes off in 2-4 steps.
    xs = np.minimum(x, 0.3)  # series branch is discarded above 0.3
    small = xs * (1.0 - xs + 1.5 * xs * xs)
    l1 = np.log1p(x)
    large = l1 * (1.0 - np.log1p(l1) / (2.0 + l1))
    return np.where(x < 0.3, small, large)


def lambert_w0(x):
    """Principal branch of the Lambert W function for x >= 0.

    Solves w * exp(w) = x by Halley iteration; the residual is driven
    below 1e-12 * max(1, x).  Accepts scalars or arrays; w(0) is 0
    exactly.
    """
    x_arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x_arr)):
        raise ValueError("lambert_w0 requires a finite argument")
    if np.any(x_arr < 0.0):
        raise ValueError("lambert_w0 is restricted to x >= 0")

    w = _w0_start(x_arr)
    tol = _W0_TOL * np.maximum(1.0, x_arr)
    for _ in range(50):
        ew = np.exp(w)
        resid = w * ew - x_arr
        if np.all(np.abs(resid) <= tol):
            break
        wp1 = w + 1.0
        w = w - resid / (ew * wp1 - (w + 2.0) * resid / (2.0 * wp1))
    if x_arr.ndim == 0:
        return float(w)
    return w


def tukey_h(x, h):
    """Tukey-h transform x * exp(h * x**2 / 2).

    Odd and strictly increasing in ``x`` for fixed ``h >= 0``; ``h = 0``
    is the identity.  Raises OverflowError when the result leaves the
    double range, so callers never see a silent inf.
    """
    x_arr = np.asarray(x, dtype=float)
    h_arr = np.asarray(h, dtype=float)
    if not (np.all(np.isfinite(x_arr)) and np.all(np.isfinite(h_arr))):
        raise ValueError("tukey_h requires finite arguments")
    if np.any(h_arr < 0.0):
        raise ValueError("tukey_h requires h >= 0")
    with np.errstate(over="ignore"):
        out = x_arr * np.exp(0.5 * h_arr * x_arr * x_arr)
    if not np.all(np.isfinite(out)):
        raise OverflowError("tukey_h overflowed the floating-point range")
    if out.ndim == 0:
        return float(out)
    return out


def inv_tukey_h(z, h):
    """Inverse Tukey-h transform z * exp(-W0(h * z**2) / 2)."""
    z_arr = np.asarray(z, dtype=float)
    h_arr = np.asarray(h, dtype=float)
    if not (np.all(np.isfinite(z_arr)) and np.all(np.isfinite(h_arr))):
        raise ValueError("inv_tukey_h requires finite arguments")
    if np.any(h_arr < 0.0):
        raise ValueError("inv_tukey_h requires h >= 0")
    w = lambert_w0(h_arr * z_arr * z_arr)
    out = z_arr * np.exp(-0.5 * np.asarray(w))
    if out.ndim == 0:
        return float(out)
    return out


def zeta1(t):
    """phi(t) / Phi(t), the derivative of log Phi.

    Evaluated through the scaled complementary error function, which is
    stable for arbitrarily negative t (no 0/0).
    """
    t_arr = np.asarray(t, dtype=float)
    with np.errstate(over="ignore"):
        out = _SQRT_2_OVER_PI / sc.erfcx(-t_arr / _SQRT2)
    if out.ndim == 0:
        return float(out)
    return out


# Below this point the direct formulas for the truncated-normal moments
# lose too many digits to cancellation; an asymptotic Mills-ratio
# expansion takes over.
_TRUNC_SERIES_CUTOFF = -100.0


def truncated_normal_moments(tau_bar, alpha_sq):
    """First two raw moments of the EM algorithm's latent truncated normal.

    Returns ``(v1, v2)`` with

        v1 = (tau_bar + zeta1(tau_bar)) / sqrt(1 + alpha_sq)
        v2 = (1 + tau_bar**2 + tau_bar * zeta1(tau_bar)) / (1 + alpha_sq)

    ``tau_bar`` may be a scalar or an array; ``alpha_sq`` is a scalar.
    Far in the left tail (tau_bar < -100) the direct expressions cancel
    catastrophically and an asymptotic expansion of the Mills ratio is
    used instead.
    """
    alpha_sq = float(alpha_sq)
    if not np.isfinite(alpha_sq) or alpha_sq < 0.0:
        raise ValueError("alpha_sq must be finite and >= 0")
    t = np.asarray(tau_bar, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError("tau_bar must be finite")

    m = zeta1(t)
    v1_num = t + m
    v2_num = 1.0 + t * t + t * m

    deep = t < _TRUNC_SERIES_CUTOFF
    if np.any(deep):
        with np.errstate(divide="ignore"):
            inv = np.where(deep, 1.0 / np.where(deep, t, 1.0), 0.0)
        inv2 = inv * inv
        v1_series = -inv * (1.0 - 2.0 * inv2 + 10.0 * inv2 * inv2)
        v2_series = inv2 * (2.0 - 10.0 * inv2 + 74.0 * inv2 * inv2)
        v1_num = np.where(deep, v1_series, v1_num)
        v2_num = np.where(deep, v2_series, v2_num)

    root = np.sqrt(1.0 + alpha_sq)
    v1 = v1_num / root
    v2 = v2_num / (1.0 + alpha_sq)
    if v1.ndim == 0:
        return float(v1), float(v2)
    return v1, v2


def _bvn_cdf(b: np.ndarray, cov: np.ndarray, acc: Accuracy) -> float:
    s = np.sqrt(np.diagonal(cov))
    b1, b2 = b / s
    rho = cov[0, 1] / (s[0] * s[1])
    rho = float(np.clip(rho, -1.0 + 1e-15, 1.0 - 1e-15))
    denom = np.sqrt(1.0 - rho * rho)

    def integrand(t):
        return np.exp(-0.5 * t * t) / np.sqrt(2.0 * np.pi) * sc.ndtr(
            (b2 - rho * t) / denom)

    epsabs = min(1e-11, 0.01 * acc.abs_tol)
    val, _ = integrate.quad(integrand, -np.inf, b1, epsabs=epsabs,
                            epsrel=1e-10, limit=200)
    return float(np.clip(val, 0.0, 1.0))


def _genz_estimate(b: np.ndarray, lower: np.ndarray, w: np.ndarray) -> float:
    # Genz separation-of-variables: each QMC point w in [0,1)^(d-1) maps
    # to a sequential sample whose weight is the product of the
    # conditional one-dimensional probabilities e_j.
    d = b.size
    m = w.shape[0]
    e0 = sc.ndtr(b[0] / lower[0, 0])
    f = np.full(m, e0)
    prev_e = np.full(m, e0)
    y = np.empty((m, d - 1))
    for j in range(1, d):
        u = np.clip(w[:, j - 1] * prev_e, 1e-300, 1.0 - 1e-16)
        y[:, j - 1] = sc.ndtri(u)
        shift = y[:, :j] @ lower[j, :j]
        prev_e = sc.ndtr((b[j] - shift) / lower[j, j])
        f *= prev_e
    return float(f.mean())


def _mvn_cdf_qmc(b: np.ndarray, cov: np.ndarray, acc: Accuracy) -> float:
    d = b.size
    # Tackling the hardest (smallest standardized bound) variable first
    # reduces the variance of the sequential factorization.
    order = np.argsort(b / np.sqrt(np.diagonal(cov)))
    b = b[order]
    lower = chol_pd(cov[np.ix_(order, order)], "cov")

    seed_seq = np.random.SeedSequence(acc.seed)
    exponent = max(1, int(np.ceil(np.log2(max(2, acc.qmc_samples // _QMC_BATCHES)))))
    est = 0.5
    for _ in range(acc.max_iter):
        children = seed_seq.spawn(_QMC_BATCHES)
        batch = np.empty(_QMC_BATCHES)
        for k in range(_QMC_BATCHES):
            sob = qmc.Sobol(d - 1, scramble=True,
                            seed=np.random.default_rng(children[k]))
            batch[k] = _genz_estimate(b, lower, sob.random_base2(exponent))
        est = float(batch.mean())
        stderr = float(batch.std(ddof=1) / np.sqrt(_QMC_BATCHES))
        if stderr <= acc.abs_tol:
            break
        exponent += 1
    return float(np.clip(est, 0.0, 1.0))


def mvn_cdf(point, mean, cov, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """P(X <= point componentwise) for X ~ N(mean, cov).

    Dimension 1 uses the error function, dimension 2 a deterministic
    quadrature, and dimension >= 3 the Genz separation-of-variables
    scheme on scrambled Sobol points (8 batches; the spread of the batch
    means provides the standard-error stopping rule at acc.abs_tol).
    """
    point = np.atleast_1d(np.asarray(point, dtype=float))
    mean = np.atleast_1d(np.asarray(mean, dtype=float))
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    d = point.shape[0]
    if point.ndim != 1 or mean.shape != (d,) or cov.shape != (d, d):
        raise ValueError("mvn_cdf: point, mean and cov dimensions disagree")

    b = point - mean
    if d == 1:
        if cov[0, 0] <= 0:
            raise ValueError("cov must be positive definite")
        return float(sc.ndtr(b[0] / np.sqrt(cov[0, 0])))
    chol_pd(cov, "cov")
    if d == 2:
        return _bvn_cdf(b, cov, acc)
    return _mvn_cdf_qmc(b, cov, acc)
