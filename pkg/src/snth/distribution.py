"""The skew-normal-Tukey-h distribution.

A random vector Y follows the SNTH law when

    Y = xi + omega * tau_h(Z),      Z ~ SN_p(0, psi_bar, eta),

with tau_h applied componentwise, omega a positive diagonal scale and
psi_bar a correlation matrix.  This module implements sampling, the
closed-form density and CDF, marginals, (conditional) moments with
their per-entry existence masks, Pearson skewness/kurtosis, the
conditional law, and the canonical form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from . import _linalg
from .skewnormal import (
    EsnParams,
    esn_log_pdf,
    esn_sample,
    sn_canonical,
)
from .special import (
    Accuracy,
    DEFAULT_ACCURACY,
    inv_tukey_h,
    lambert_w0,
    mvn_cdf,
    zeta1,
)

__all__ = [
    "SnthParams",
    "SnthConditional",
    "MomentReport",
    "snth_sample",
    "snth_log_pdf",
    "snth_cdf",
    "snth_marginal",
    "snth_moments",
    "snth_skew_kurt",
    "snth_conditional",
    "snth_conditional_moments",
    "snth_canonical",
]

_SQRT_2_OVER_PI = np.sqrt(2.0 / np.pi)


def _as_vector(v, name: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if arr.ndim != 1 or not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be a finite vector")
    return arr


@dataclass(frozen=True, eq=False)
class SnthParams:
    """Full SNTH parameter set (xi, omega, psi_bar, eta, h).

    ``omega_diag`` holds the (strictly positive) diagonal of the scale
    matrix, ``psi_bar`` is the latent correlation matrix, and ``h >= 0``
    controls tail thickness componentwise (h = 0 recovers the
    skew-normal).
    """

    xi: np.ndarray
    omega_diag: np.ndarray
    psi_bar: np.ndarray
    eta: np.ndarray
    h: np.ndarray

    def __post_init__(self) -> None:
        xi = _as_vector(self.xi, "xi")
        omega = _as_vector(self.omega_diag, "omega_diag")
        eta = _as_vector(self.eta, "eta")
        h = _as_vector(self.h, "h")
        psi_bar = np.atleast_2d(np.asarray(self.psi_bar, dtype=float))
        p = xi.shape[0]
        if (omega.shape, eta.shape, h.shape) != ((p,), (p,), (p,)) \
                or psi_bar.shape != (p, p):
            raise ValueError("SnthParams dimensions disagree")
        if np.any(omega <= 0):
            raise ValueError("omega_diag must be strictly positive")
        if np.any(h < 0):
            raise ValueError("h must be nonnegative")
        if np.max(np.abs(np.diagonal(psi_bar) - 1.0)) > 1e-8:
            raise ValueError("psi_bar must have unit diagonal")
        _linalg.chol_pd(psi_bar, "psi_bar")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "omega_diag", omega)
        object.__setattr__(self, "psi_bar", psi_bar)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "h", h)

    @property
    def dim(self) -> int:
        return self.xi.shape[0]

    @property
    def latent(self) -> EsnParams:
        """The latent skew-normal law SN(0, psi_bar, eta)."""
        return EsnParams(np.zeros(self.dim), self.psi_bar, self.eta, 0.0)


@dataclass(frozen=True, eq=False)
class MomentReport:
    """Mean/covariance with per-entry existence flags.

    Heavy tails make individual moments infinite: the mean of
    coordinate i exists only for h_i < 1/(1 + eta_i^2), its variance
    only for h_i < 1/(2 (1 + eta_i^2)), and a covariance entry needs its
    tilted 2x2 scale matrix to stay positive definite.  Undefined
    entries are masked (numpy masked arrays, data zeroed), never NaN and
    never an error.
    """

    mean: np.ma.MaskedArray
    cov: np.ma.MaskedArray

    @property
    def mean_defined(self) -> np.ndarray:
        return ~np.ma.getmaskarray(self.mean)

    @property
    def cov_defined(self) -> np.ndarray:
        return ~np.ma.getmaskarray(self.cov)


def _masked(values: np.ndarray, defined: np.ndarray) -> np.ma.MaskedArray:
    data = np.where(defined, values, 0.0)
    return np.ma.MaskedArray(data, mask=~defined)


def snth_sample(n: int, p: SnthParams, seed) -> np.ndarray:
    """Draw n rows of xi + omega * tau_h(Z) with Z ~ SN(0, psi_bar, eta)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    z = esn_sample(n, p.latent, seed)
    with np.errstate(over="ignore"):
        t = z * np.exp(0.5 * p.h * z * z)
    bad = ~np.all(np.isfinite(t), axis=1)
    if np.any(bad):
        raise OverflowError(
            "tukey_h overflow in sampled rows "
            f"{np.flatnonzero(bad).tolist()}")
    return p.xi + p.omega_diag * t


def _standardize(y, p: SnthParams) -> tuple[np.ndarray, bool]:
    arr = np.asarray(y, dtype=float)
    single = arr.ndim == 1
    rows = arr[None, :] if single else arr
    if rows.ndim != 2 or rows.shape[1] != p.dim:
        raise ValueError("y must be a length-p vector or an (n, p) matrix")
    return (rows - p.xi) / p.omega_diag, single


def _latent_and_jacobian(x: np.ndarray, h: np.ndarray
                         ) -> tuple[np.ndarray, np.ndarray]:
    """g = tau_h^{-1}(x) rowwise plus the summed log-Jacobian of the
    inverse map.  Uses hg^2 = W0(hx^2), so the per-coordinate factor
    exp(W/2) / (hx^2 + exp(W)) collapses to exp(-W/2) / (1 + W)."""
    w = lambert_w0(h * x * x)
    g = x * np.exp(-0.5 * w)
    log_jac = np.sum(-0.5 * w - np.log1p(w), axis=1)
    return g, log_jac


def snth_log_pdf(y, p: SnthParams):
    """Log density of the SNTH law.

    ``y`` may be a single length-p vector or an (n, p) matrix of rows.
    Finite for every finite y.
    """
    x, single = _standardize(y, p)
    g, log_jac = _latent_and_jacobian(x, p.h)
    out = esn_log_pdf(g, p.latent) + log_jac - np.sum(np.log(p.omega_diag))
    return float(out[0]) if single else out


def snth_cdf(y, p: SnthParams, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """CDF via one (p+1)-dimensional Gaussian CDF.

    F(y) = 2 Phi_{p+1}(y_star; 0, Omega_star) with
    y_star = (tau_h^{-1}((y - xi)/omega), 0) and
    Omega_star = [[psi_bar + eta eta^T, -eta], [-eta^T, 1]].
    """
    x, _ = _standardize(np.asarray(y, dtype=float), p)
    g = inv_tukey_h(x[0], p.h)
    star = np.concatenate([g, [0.0]])
    omega = p.psi_bar + np.outer(p.eta, p.eta)
    cov = np.block([[omega, -p.eta[:, None]],
                    [-p.eta[None, :], np.ones((1, 1))]])
    return float(np.clip(2.0 * mvn_cdf(star, np.zeros(p.dim + 1), cov, acc),
                         0.0, 1.0))


def snth_marginal(p: SnthParams, idx) -> SnthParams:
    """Marginal SNTH law over the coordinates in idx."""
    ids = np.atleast_1d(np.asarray(idx, dtype=int))
    if ids.size == 0:
        raise ValueError("idx must be nonempty")
    if np.any(ids < 0) or np.any(ids >= p.dim):
        raise ValueError("idx out of range")
    if len(set(ids.tolist())) != ids.size:
        raise ValueError("idx must not repeat coordinates")
    return SnthParams(p.xi[ids], p.omega_diag[ids],
                      p.psi_bar[np.ix_(ids, ids)], p.eta[ids], p.h[ids])


def _std_moment1(eta: float, h: float) -> float:
    """E tau_h(Z) for scalar Z ~ SN(0, 1, eta); requires h < 1/(1+eta^2)."""
    b = 1.0 + eta * eta
    return _SQRT_2_OVER_PI * eta / (np.sqrt(1.0 - h) * (1.0 - h * b))


def _std_moment2(eta: float, h: float) -> float:
    """E tau_h(Z)^2; requires h < 1/(2(1+eta^2))."""
    b = 1.0 + eta * eta
    return b / (1.0 - 2.0 * h * b) ** 1.5


def snth_moments(p: SnthParams) -> MomentReport:
    """Mean vector and covariance matrix with existence masks.

    Diagonal terms use the closed univariate forms; each cross term
    sigma_ij integrates the 2x2 latent block against the exponential
    tilt exp(h_i x_i^2 / 2 + h_j x_j^2 / 2), which exists exactly when
    A = (B^{-1} - H)^{-1} is positive definite for
    B = psi_bar_{ij} + eta_{ij} eta_{ij}^T, H = diag(h_i, h_j)
    (and the two means exist, so the centering is finite).
    """
    d = p.dim
    b = 1.0 + p.eta ** 2
    mean_ok = p.h < 1.0 / b
    var_ok = p.h < 1.0 / (2.0 * b)

    m1 = np.zeros(d)
    m2 = np.zeros(d)
    for i in range(d):
        if mean_ok[i]:
            m1[i] = _std_moment1(p.eta[i], p.h[i])
        if var_ok[i]:
            m2[i] = _std_moment2(p.eta[i], p.h[i])
    mean = _masked(p.xi + p.omega_diag * m1, mean_ok)

    cov = np.zeros((d, d))
    cov_ok = np.zeros((d, d), dtype=bool)
    for i in range(d):
        cov_ok[i, i] = var_ok[i]
        if var_ok[i]:
            cov[i, i] = p.omega_diag[i] ** 2 * (m2[i] - m1[i] ** 2)
    for i in range(d):
        for j in range(i + 1, d):
            ok = bool(mean_ok[i] and mean_ok[j])
            cross = 0.0
            if ok:
                ids = [i, j]
                bm = p.psi_bar[np.ix_(ids, ids)] + np.outer(p.eta[ids],
                                                            p.eta[ids])
                bm_inv = np.linalg.inv(bm)
                tilted = bm_inv - np.diag(p.h[ids])
                try:
                    np.linalg.cholesky(tilted)
                except np.linalg.LinAlgError:
                    ok = False
                if ok:
                    a = np.linalg.inv(tilted)
                    det_ratio = np.sqrt(np.linalg.det(a) / np.linalg.det(bm))
                    tail = (2.0 / np.pi) * p.eta[i] * p.eta[j] / (
                        np.sqrt((1.0 - p.h[i]) * (1.0 - p.h[j]))
                        * (1.0 - p.h[i] * b[i]) * (1.0 - p.h[j] * b[j]))
                    cross = p.omega_diag[i] * p.omega_diag[j] * (
                        det_ratio * a[0, 1] - tail)
            cov_ok[i, j] = cov_ok[j, i] = ok
            cov[i, j] = cov[j, i] = cross
    return MomentReport(mean, _masked(cov, cov_ok))


def snth_skew_kurt(p: SnthParams) -> tuple[float | None, float | None]:
    """Pearson skewness gamma1 and excess kurtosis gamma2, scalar case.

    Both are location/scale free, so any univariate SnthParams is
    accepted.  gamma1 needs h < 1/(3(1+eta^2)), gamma2 needs
    h < 1/(4(1+eta^2)); an unmet condition yields None.
    """
    if p.dim != 1:
        raise ValueError("snth_skew_kurt is defined for the scalar case")
    eta, h = float(p.eta[0]), float(p.h[0])
    b = 1.0 + eta * eta

    gamma1 = None
    gamma2 = None
    if h < 1.0 / (3.0 * b):
        m1 = _std_moment1(eta, h)
        m2 = _std_moment2(eta, h)
        m3 = (_SQRT_2_OVER_PI * b ** 1.5 / (1.0 - 3.0 * h * b) ** 2
              * (2.0 * eta ** 3 + 3.0 * eta * (1.0 - 3.0 * h * b))
              / (b * (1.0 - 3.0 * h)) ** 1.5)
        mu2 = m2 - m1 * m1
        mu3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 ** 3
        gamma1 = float(mu3 / mu2 ** 1.5)
        if h < 1.0 / (4.0 * b):
            m4 = 3.0 * b * b / (1.0 - 4.0 * h * b) ** 2.5
            mu4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 ** 4
            gamma2 = float(mu4 / mu2 ** 2 - 3.0)
    return gamma1, gamma2


@dataclass(frozen=True, eq=False)
class SnthConditional:
    """The conditional law of one SNTH block given the other.

    ``base`` is the extended skew-normal law of the latent variable Y0;
    the conditional variable itself is xi1 + omega1 * tau_h1(Y0)
    componentwise.  :func:`snth_conditional_moments` reports moments of
    tau_h1(Y0) (the standardized part); rescale by omega1 and shift by
    xi1 for the observable block.
    """

    base: EsnParams
    h1: np.ndarray
    xi1: np.ndarray
    omega1: np.ndarray

    def __post_init__(self) -> None:
        h1 = _as_vector(self.h1, "h1")
        xi1 = _as_vector(self.xi1, "xi1")
        omega1 = _as_vector(self.omega1, "omega1")
        if np.any(h1 < 0):
            raise ValueError("h1 must be nonnegative")
        if np.any(omega1 <= 0):
            raise ValueError("omega1 must be strictly positive")
        if not (h1.shape == xi1.shape == omega1.shape
                == (self.base.dim,)):
            raise ValueError("SnthConditional dimensions disagree")
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "xi1", xi1)
        object.__setattr__(self, "omega1", omega1)

    @property
    def dim(self) -> int:
        return self.base.dim

    def log_pdf(self, y1):
        """Log density of the conditional block at y1 (vector or rows)."""
        arr = np.asarray(y1, dtype=float)
        single = arr.ndim == 1
        rows = arr[None, :] if single else arr
        x = (rows - self.xi1) / self.omega1
        w = lambert_w0(self.h1 * x * x)
        g = x * np.exp(-0.5 * w)
        log_jac = np.sum(-0.5 * w - np.log1p(w), axis=1)
        out = (esn_log_pdf(g, self.base) + log_jac
               - np.sum(np.log(self.omega1)))
        return float(out[0]) if single else out

    def sample(self, n: int, seed) -> np.ndarray:
        """Draw n rows of xi1 + omega1 * tau_h1(Y0)."""
        y0 = esn_sample(n, self.base, seed)
        with np.errstate(over="ignore"):
            t = y0 * np.exp(0.5 * self.h1 * y0 * y0)
        if not np.all(np.isfinite(t)):
            raise OverflowError("tukey_h overflow in conditional sample")
        return self.xi1 + self.omega1 * t


def snth_conditional(p: SnthParams, split: tuple[int, int], y2
                     ) -> SnthConditional:
    """Conditional law of the leading block given the trailing one.

    The conditioning value enters through its latent image
    g2 = tau_h2^{-1}((y2 - xi2)/omega2); the latent conditional is the
    extended skew-normal

        Y0 ~ ESN(psi12 psi22^{-1} g2,  psi_bar_{11.2},
                 (eta1 - psi12 psi22^{-1} eta2)/c,
                 eta2^T psi22^{-1} g2 / c),
        c = sqrt(1 + eta2^T psi22^{-1} eta2),

    and Y1 | Y2 = y2 is xi1 + omega1 * tau_h1(Y0) componentwise.
    """
    p1, p2 = int(split[0]), int(split[1])
    if p1 < 1 or p2 < 1 or p1 + p2 != p.dim:
        raise ValueError("split must be positive sizes summing to the dimension")
    y2 = _as_vector(y2, "y2")
    if y2.shape[0] != p2:
        raise ValueError("y2 has the wrong dimension")

    g2 = inv_tukey_h((y2 - p.xi[p1:]) / p.omega_diag[p1:], p.h[p1:])
    psi11 = p.psi_bar[:p1, :p1]
    psi12 = p.psi_bar[:p1, p1:]
    psi22 = p.psi_bar[p1:, p1:]
    chol22 = _linalg.chol_pd(psi22, "psi_bar22")
    s_g = _linalg.solve_chol(chol22, g2)
    s_eta = _linalg.solve_chol(chol22, p.eta[p1:])
    c = np.sqrt(1.0 + p.eta[p1:] @ s_eta)

    psi_c = psi11 - psi12 @ _linalg.solve_chol(chol22, psi12.T)
    base = EsnParams(psi12 @ s_g, 0.5 * (psi_c + psi_c.T),
                     (p.eta[:p1] - psi12 @ s_eta) / c,
                     float(p.eta[p1:] @ s_g) / c)
    return SnthConditional(base, p.h[:p1], p.xi[:p1], p.omega_diag[:p1])


def _cond_mean_one(xi_p: float, psi_ii: float, e: float, t: float, h: float
                   ) -> tuple[bool, float]:
    """E tau_h(Y0_i) for one coordinate of the latent ESN conditional."""
    s = psi_ii + e * e
    if not h < 1.0 / s:
        return False, 0.0
    m = xi_p + t * e
    den = 1.0 - s * h
    xi_t = m / den
    om_t = np.sqrt(s / den)
    alpha_t = (e / np.sqrt(psi_ii)) / np.sqrt(den)
    root = np.sqrt(1.0 + alpha_t * alpha_t)
    delta_t = alpha_t / root
    alpha0 = (t * np.sqrt(psi_ii)
              + (e / np.sqrt(psi_ii)) * (t * e + xi_p * s * h) / den) / np.sqrt(s)
    tau_t = alpha0 / root
    log_pref = (-0.5 * np.log(den) + m * m * h / (2.0 * den)
                + sc.log_ndtr(tau_t) - sc.log_ndtr(t))
    return True, float(np.exp(log_pref) * (xi_t + om_t * delta_t * zeta1(tau_t)))


def _cond_second_one(xi_p: float, psi_ii: float, e: float, t: float, h: float
                     ) -> tuple[bool, float]:
    """E tau_h(Y0_i)^2; the tilt doubles (exp(h x^2)), so every tilde
    quantity switches to the 1 - 2sh denominator."""
    s = psi_ii + e * e
    if not h < 1.0 / (2.0 * s):
        return False, 0.0
    m = xi_p + t * e
    den = 1.0 - 2.0 * s * h
    xi_t = m / den
    om_sq = s / den
    alpha_t = (e / np.sqrt(psi_ii)) / np.sqrt(den)
    root = np.sqrt(1.0 + alpha_t * alpha_t)
    delta_t = alpha_t / root
    alpha0 = (t * np.sqrt(psi_ii)
              + (e / np.sqrt(psi_ii)) * (t * e + 2.0 * xi_p * s * h) / den
              ) / np.sqrt(s)
    tau_t = alpha0 / root
    mills = zeta1(tau_t)
    log_pref = (-0.5 * np.log(den) + m * m * h / den
                + sc.log_ndtr(tau_t) - sc.log_ndtr(t))
    second = (xi_t * xi_t + om_sq
              + 2.0 * xi_t * np.sqrt(om_sq) * delta_t * mills
              - tau_t * mills * om_sq * delta_t * delta_t)
    return True, float(np.exp(log_pref) * second)


def _cond_cross_one(base: EsnParams, h1: np.ndarray, i: int, j: int
                    ) -> tuple[bool, float]:
    """E tau_hi(Y0_i) tau_hj(Y0_j) for one latent pair (i, j)."""
    ids = [i, j]
    psi = base.psi[np.ix_(ids, ids)]
    eta = base.eta[ids]
    xi_p = base.xi[ids]
    t = base.tau
    hh = np.diag(h1[ids])

    omega = psi + np.outer(eta, eta)
    omega_inv = np.linalg.inv(omega)
    tilted = omega_inv - hh
    try:
        np.linalg.cholesky(tilted)
    except np.linalg.LinAlgError:
        return False, 0.0

    omega_t = np.linalg.inv(tilted)
    mu = xi_p + t * eta
    xi_t = omega_t @ (omega_inv @ mu)
    psi_inv_eta = np.linalg.solve(psi, eta)
    c = np.sqrt(1.0 + eta @ psi_inv_eta)
    b_vec = psi_inv_eta / c            # Phi(a + b.x) skewing direction
    alpha0 = (t + eta @ np.linalg.solve(psi, xi_t - xi_p)) / c

    om_t = np.sqrt(np.diagonal(omega_t))
    q = float(b_vec @ omega_t @ b_vec)
    root = np.sqrt(1.0 + q)
    eta_t = (omega_t @ b_vec) / root   # = om_t * delta_t componentwise
    tau_t = alpha0 / root
    mills = zeta1(tau_t)

    log_det = 0.5 * (np.log(np.linalg.det(omega_t))
                     - np.log(np.linalg.det(omega)))
    quad = mu @ (omega_inv @ mu) - mu @ (omega_inv @ omega_t @ omega_inv @ mu)
    log_pref = log_det - 0.5 * quad + sc.log_ndtr(tau_t) - sc.log_ndtr(t)
    cross = (omega_t[0, 1] - tau_t * mills * eta_t[0] * eta_t[1]
             + xi_t[0] * xi_t[1]
             + mills * (xi_t[0] * eta_t[1] + xi_t[1] * eta_t[0]))
    return True, float(np.exp(log_pref) * cross)


def snth_conditional_moments(c: SnthConditional) -> MomentReport:
    """Moments of tau_h1(Y0), the standardized conditional block.

    Means exist for h_i < 1/(psi_{11.2, ii} + eta_{1.2, i}^2), variances
    with an extra factor 2, and cross terms whenever the tilted 2x2
    latent scale stays positive definite (and both means exist).
    Multiply by omega1 (and shift by xi1) for the observable block.
    """
    d = c.dim
    base = c.base
    mean_ok = np.zeros(d, dtype=bool)
    m1 = np.zeros(d)
    m2 = np.zeros(d)
    var_ok = np.zeros(d, dtype=bool)
    for i in range(d):
        mean_ok[i], m1[i] = _cond_mean_one(
            base.xi[i], base.psi[i, i], base.eta[i], base.tau, c.h1[i])
        var_ok[i], m2[i] = _cond_second_one(
            base.xi[i], base.psi[i, i], base.eta[i], base.tau, c.h1[i])

    cov = np.zeros((d, d))
    cov_ok = np.zeros((d, d), dtype=bool)
    for i in range(d):
        cov_ok[i, i] = var_ok[i] and mean_ok[i]
        if cov_ok[i, i]:
            cov[i, i] = m2[i] - m1[i] ** 2
    for i in range(d):
        for j in range(i + 1, d):
            ok = bool(mean_ok[i] and mean_ok[j])
            cross = 0.0
            if ok:
                ok, raw = _cond_cross_one(base, c.h1, i, j)
                if ok:
                    cross = raw - m1[i] * m1[j]
            cov_ok[i, j] = cov_ok[j, i] = ok
            cov[i, j] = cov[j, i] = cross
    return MomentReport(_masked(m1, mean_ok), _masked(cov, cov_ok))


def snth_canonical(p: SnthParams) -> tuple[np.ndarray, SnthParams]:
    """Canonical form: skewness concentrated on latent coordinate 1.

    Returns (H, canon) with canon = SNTH(0, 1, I, eta_star, h).  The
    transform acts on the latent scale:

        omega_star^{-1}(Y_star - xi_star) = tau_h[ H tau_h^{-1}{omega^{-1}(Y - xi)} ]

    i.e. push the standardized data through the inverse transform, map
    by H, and re-apply tau_h.
    """
    h_star, canon_sn = sn_canonical(p.latent)
    canon = SnthParams(np.zeros(p.dim), np.ones(p.dim), np.eye(p.dim),
                       canon_sn.eta, p.h)
    return h_star, canon
