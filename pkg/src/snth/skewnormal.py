"""Skew-normal layer: ASN/SN parameterizations and the extended family.

Two charts of the same law are supported.  ``AsnParams`` carries the
classical (xi, Omega, alpha) triple; ``EsnParams`` carries the
(xi, Psi, eta, tau) quadruple in which Omega = Psi + eta eta^T and
tau = 0 recovers the plain skew-normal.  The extended case (tau != 0)
arises as the conditional law of a skew-normal, which is what the
heavier-tailed machinery downstream leans on.

The stochastic representation used throughout: with U distributed as
(Z | Z + tau > 0) for standard normal Z, independent of W ~ N(0, Psi),

    Y = xi + tau * eta + eta * U + W.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from . import _linalg
from .special import Accuracy, DEFAULT_ACCURACY, mvn_cdf, zeta1

__all__ = [
    "AsnParams",
    "EsnParams",
    "asn_to_sn",
    "sn_to_asn",
    "esn_log_pdf",
    "esn_sample",
    "esn_moments",
    "sn_marginal",
    "sn_conditional",
    "sn_cdf",
    "sn_canonical",
]

_LOG_2PI = np.log(2.0 * np.pi)


def _as_vector(v, name: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a vector")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class AsnParams:
    """Skew-normal parameters in the (xi, Omega, alpha) chart."""

    xi: np.ndarray
    omega_mat: np.ndarray
    alpha: np.ndarray

    def __post_init__(self) -> None:
        xi = _as_vector(self.xi, "xi")
        alpha = _as_vector(self.alpha, "alpha")
        omega = np.atleast_2d(np.asarray(self.omega_mat, dtype=float))
        p = xi.shape[0]
        if omega.shape != (p, p) or alpha.shape != (p,):
            raise ValueError("AsnParams dimensions disagree")
        _linalg.chol_pd(omega, "omega_mat")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "omega_mat", omega)
        object.__setattr__(self, "alpha", alpha)

    @property
    def dim(self) -> int:
        return self.xi.shape[0]

    @property
    def scale_diag(self) -> np.ndarray:
        """omega = diag(Omega)^(1/2)."""
        return np.sqrt(np.diagonal(self.omega_mat))

    @property
    def omega_bar(self) -> np.ndarray:
        """Correlation matrix of Omega."""
        return _linalg.cov_to_corr(self.omega_mat)

    @property
    def delta(self) -> np.ndarray:
        oba = self.omega_bar @ self.alpha
        return oba / np.sqrt(1.0 + self.alpha @ oba)


@dataclass(frozen=True, eq=False)
class EsnParams:
    """Extended skew-normal parameters (xi, Psi, eta, tau).

    tau = 0 is the plain skew-normal; Psi must be symmetric positive
    definite.
    """

    xi: np.ndarray
    psi: np.ndarray
    eta: np.ndarray
    tau: float = 0.0

    def __post_init__(self) -> None:
        xi = _as_vector(self.xi, "xi")
        eta = _as_vector(self.eta, "eta")
        psi = np.atleast_2d(np.asarray(self.psi, dtype=float))
        p = xi.shape[0]
        if psi.shape != (p, p) or eta.shape != (p,):
            raise ValueError("EsnParams dimensions disagree")
        tau = float(self.tau)
        if not np.isfinite(tau):
            raise ValueError("tau must be finite")
        _linalg.chol_pd(psi, "psi")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "tau", tau)

    @property
    def dim(self) -> int:
        return self.xi.shape[0]


def asn_to_sn(p: AsnParams) -> EsnParams:
    """Convert (xi, Omega, alpha) to (xi, Psi, eta) with tau = 0.

    Psi = omega (Omega_bar - delta delta^T) omega and eta = omega delta,
    where delta = (1 + alpha^T Omega_bar alpha)^(-1/2) Omega_bar alpha.
    """
    om = p.scale_diag
    delta = p.delta
    psi = (p.omega_bar - np.outer(delta, delta)) * np.outer(om, om)
    return EsnParams(p.xi, 0.5 * (psi + psi.T), om * delta, 0.0)


def sn_to_asn(p: EsnParams) -> AsnParams:
    """Convert (xi, Psi, eta) with tau = 0 back to (xi, Omega, alpha)."""
    if p.tau != 0.0:
        raise ValueError("sn_to_asn is defined for tau = 0 only")
    omega = p.psi + np.outer(p.eta, p.eta)
    om = np.sqrt(np.diagonal(omega))
    psi_inv_eta = _linalg.solve_chol(_linalg.chol_pd(p.psi, "psi"), p.eta)
    alpha = om * psi_inv_eta / np.sqrt(1.0 + p.eta @ psi_inv_eta)
    return AsnParams(p.xi, omega, alpha)


def _rows(y, p: int) -> tuple[np.ndarray, bool]:
    arr = np.asarray(y, dtype=float)
    if arr.ndim == 1:
        if arr.shape[0] != p:
            raise ValueError("y has the wrong dimension")
        return arr[None, :], True
    if arr.ndim == 2 and arr.shape[1] == p:
        return arr, False
    raise ValueError("y must be a length-p vector or an (n, p) matrix")


def esn_log_pdf(y, p: EsnParams):
    """Log density of the extended skew-normal.

    log{ (1/Phi(tau)) phi_p(y; xi + tau*eta, Psi + eta eta^T)
         * Phi[(tau + eta^T Psi^{-1} (y - xi)) / sqrt(1 + eta^T Psi^{-1} eta)] }

    ``y`` may be a single point or a matrix of row vectors.
    """
    rows, single = _rows(y, p.dim)
    omega = p.psi + np.outer(p.eta, p.eta)
    chol_om = _linalg.chol_pd(omega, "psi + eta eta^T")
    psi_inv_eta = _linalg.solve_chol(_linalg.chol_pd(p.psi, "psi"), p.eta)
    s = float(p.eta @ psi_inv_eta)

    diff = rows - (p.xi + p.tau * p.eta)
    quad = _linalg.quad_forms(chol_om, diff)
    gauss = -0.5 * (p.dim * _LOG_2PI + _linalg.logdet_from_chol(chol_om) + quad)
    skew_arg = (p.tau + (rows - p.xi) @ psi_inv_eta) / np.sqrt(1.0 + s)
    out = gauss + sc.log_ndtr(skew_arg) - sc.log_ndtr(p.tau)
    return float(out[0]) if single else out


def _truncated_std_normal(n: int, lower: float, rng) -> np.ndarray:
    """Draws of Z | Z > lower for standard normal Z."""
    out = np.empty(n)
    filled = 0
    if lower <= 0.0:
        # acceptance probability is at least 1/2: plain rejection
        while filled < n:
            cand = rng.standard_normal(max(64, 2 * (n - filled)))
            keep = cand[cand > lower]
            take = min(keep.size, n - filled)
            out[filled:filled + take] = keep[:take]
            filled += take
        return out
    # Robert's translated-exponential rejection for a positive bound
    a = 0.5 * (lower + np.sqrt(lower * lower + 4.0))
    while filled < n:
        m = max(64, 2 * (n - filled))
        z = lower + rng.exponential(1.0 / a, size=m)
        accept = rng.random(m) <= np.exp(-0.5 * (z - a) ** 2)
        keep = z[accept]
        take = min(keep.size, n - filled)
        out[filled:filled + take] = keep[:take]
        filled += take
    return out


def _resolve_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def esn_sample(n: int, p: EsnParams, seed) -> np.ndarray:
    """Draw n rows of Y = xi + tau*eta + eta*U + W.

    U =d (Z | Z + tau > 0) and W ~ N_p(0, Psi) are independent; tau = 0
    gives the half-normal construction of the plain skew-normal.  The
    same seed always yields the same output.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = _resolve_rng(seed)
    u = _truncated_std_normal(n, -p.tau, rng)
    chol_psi = _linalg.chol_pd(p.psi, "psi")
    w = rng.standard_normal((n, p.dim)) @ chol_psi.T
    return p.xi + p.tau * p.eta + u[:, None] * p.eta + w


def esn_moments(p: EsnParams) -> tuple[np.ndarray, np.ndarray]:
    """Mean and covariance of the extended skew-normal.

    With m = zeta1(tau): mean = xi + (tau + m) eta and
    cov = Psi + (1 - tau*m - m^2) eta eta^T.
    """
    m = zeta1(p.tau)
    mean = p.xi + (p.tau + m) * p.eta
    cov = p.psi + (1.0 - p.tau * m - m * m) * np.outer(p.eta, p.eta)
    return mean, cov


def _check_idx(idx, p: int) -> np.ndarray:
    ids = np.atleast_1d(np.asarray(idx, dtype=int))
    if ids.size == 0:
        raise ValueError("idx must be nonempty")
    if np.any(ids < 0) or np.any(ids >= p):
        raise ValueError("idx out of range")
    if len(set(ids.tolist())) != ids.size:
        raise ValueError("idx must not repeat coordinates")
    return ids


def sn_marginal(p: EsnParams, idx) -> EsnParams:
    """Marginal law over the coordinates in idx (block extraction).

    Marginalizing keeps tau: the latent truncated variable is shared
    across coordinates.
    """
    ids = _check_idx(idx, p.dim)
    return EsnParams(p.xi[ids], p.psi[np.ix_(ids, ids)], p.eta[ids], p.tau)


def sn_conditional(p: EsnParams, split: tuple[int, int], y2) -> EsnParams:
    """Conditional law of the first block given the second, tau = 0 input.

    For Y ~ SN(xi, Psi, eta) partitioned into (p1, p2):

        Y1 | Y2 = y2  ~  ESN(xi_{1.2}, Psi_{11.2}, eta_{1.2}, tau_{1.2})

    with xi_{1.2}  = xi1 + Psi12 Psi22^{-1} (y2 - xi2),
         Psi_{11.2} = Psi11 - Psi12 Psi22^{-1} Psi21,
         eta_{1.2} = (eta1 - Psi12 Psi22^{-1} eta2) / c,
         tau_{1.2} = eta2^T Psi22^{-1} (y2 - xi2) / c,
         c = sqrt(1 + eta2^T Psi22^{-1} eta2).
    """
    if p.tau != 0.0:
        raise ValueError("sn_conditional is defined for tau = 0 only")
    p1, p2 = int(split[0]), int(split[1])
    if p1 < 1 or p2 < 1 or p1 + p2 != p.dim:
        raise ValueError("split must be positive sizes summing to the dimension")
    y2 = _as_vector(y2, "y2")
    if y2.shape[0] != p2:
        raise ValueError("y2 has the wrong dimension")

    psi11 = p.psi[:p1, :p1]
    psi12 = p.psi[:p1, p1:]
    psi22 = p.psi[p1:, p1:]
    chol22 = _linalg.chol_pd(psi22, "psi22")
    s_y = _linalg.solve_chol(chol22, y2 - p.xi[p1:])
    s_eta = _linalg.solve_chol(chol22, p.eta[p1:])
    c = np.sqrt(1.0 + p.eta[p1:] @ s_eta)

    xi_c = p.xi[:p1] + psi12 @ s_y
    psi_c = psi11 - psi12 @ _linalg.solve_chol(chol22, psi12.T)
    eta_c = (p.eta[:p1] - psi12 @ s_eta) / c
    tau_c = float(p.eta[p1:] @ s_y) / c
    return EsnParams(xi_c, 0.5 * (psi_c + psi_c.T), eta_c, tau_c)


def sn_cdf(y, p: EsnParams, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """CDF of the plain skew-normal via one (p+1)-dimensional normal CDF.

    F(y) = 2 Phi_{p+1}((y - xi, 0); 0, [[Psi + eta eta^T, -eta], [-eta^T, 1]]).
    """
    if p.tau != 0.0:
        raise ValueError("sn_cdf is defined for tau = 0 only")
    y = _as_vector(y, "y")
    if y.shape[0] != p.dim:
        raise ValueError("y has the wrong dimension")
    star = np.concatenate([y - p.xi, [0.0]])
    omega = p.psi + np.outer(p.eta, p.eta)
    cov = np.block([[omega, -p.eta[:, None]], [-p.eta[None, :], np.ones((1, 1))]])
    return float(np.clip(2.0 * mvn_cdf(star, np.zeros(p.dim + 1), cov, acc),
                         0.0, 1.0))


def sn_canonical(p: EsnParams) -> tuple[np.ndarray, EsnParams]:
    """Canonical form: a linear map concentrating all skewness on axis 1.

    Returns (H, canon) with canon = SN(0, I_p, (sqrt(alpha^T Omega_bar
    alpha), 0, ..., 0)) and H such that H (Y - xi) is distributed as
    canon.  H = blockdiag(sqrt(1 + a2), I_{p-1}) Q Omega^{-1/2}, where Q
    diagonalizes Omega^{-1/2} (Psi + (1 - 2/pi) eta eta^T) Omega^{-1/2}.
    """
    if p.tau != 0.0:
        raise ValueError("sn_canonical is defined for tau = 0 only")
    asn = sn_to_asn(p)
    oba = asn.omega_bar @ asn.alpha
    a2 = float(asn.alpha @ oba)

    evals_om, evecs_om = np.linalg.eigh(asn.omega_mat)
    inv_sqrt = (evecs_om / np.sqrt(evals_om)) @ evecs_om.T
    sigma = p.psi + (1.0 - 2.0 / np.pi) * np.outer(p.eta, p.eta)
    m = inv_sqrt @ sigma @ inv_sqrt
    evals, evecs = np.linalg.eigh(0.5 * (m + m.T))
    # Ascending eigenvalue order puts the single skewed direction (the
    # one eigenvalue below 1; the rest equal 1 exactly) on coordinate 1.
    q = evecs.T
    for i in range(q.shape[0]):
        row = q[i]
        j = np.argmax(np.abs(row) > 1e-12)
        if row[j] < 0:
            q[i] = -row

    h_star = q @ inv_sqrt
    h_star[0] *= np.sqrt(1.0 + a2)
    if h_star[0] @ p.eta < 0:
        h_star[0] = -h_star[0]
    eta_star = np.zeros(p.dim)
    eta_star[0] = np.sqrt(a2)
    canon = EsnParams(np.zeros(p.dim), np.eye(p.dim), eta_star, 0.0)
    return h_star, canon
