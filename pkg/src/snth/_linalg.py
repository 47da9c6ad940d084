"""Cholesky-based helpers for symmetric positive-definite matrices.

Matrix inverses throughout the package go through these routines so
that non-positive-definite or numerically singular inputs fail loudly
in one place.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

# Condition numbers above this are treated as singular: the downstream
# formulas (Schur complements, tilted covariances) amplify error too
# much to return anything trustworthy.
MAX_CONDITION = 1e12


def chol_pd(mat: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Lower Cholesky factor of a symmetric positive-definite matrix.

    Raises
    ------
    ValueError
        If ``mat`` is not square/symmetric, not positive definite, or
        has a 2-norm condition estimate above ``MAX_CONDITION``.
    """
    a = np.asarray(mat, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    if not np.allclose(a, a.T, rtol=1e-9, atol=1e-12):
        raise ValueError(f"{name} must be symmetric")
    try:
        lower = np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        raise ValueError(f"{name} is not positive definite") from None
    if a.shape[0] > 1:
        ev = np.linalg.eigvalsh(a)
        if ev[0] <= 0 or ev[-1] / ev[0] > MAX_CONDITION:
            raise ValueError(f"{name} is numerically singular "
                             f"(condition estimate > {MAX_CONDITION:.0e})")
    return lower


def solve_chol(lower: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b given the lower Cholesky factor of A."""
    y = solve_triangular(lower, b, lower=True)
    return solve_triangular(lower.T, y, lower=False)


def inv_from_chol(lower: np.ndarray) -> np.ndarray:
    return solve_chol(lower, np.eye(lower.shape[0]))


def logdet_from_chol(lower: np.ndarray) -> float:
    return 2.0 * float(np.sum(np.log(np.diagonal(lower))))


def quad_forms(lower: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Row-wise quadratic forms rows_i^T A^{-1} rows_i from chol(A)."""
    sol = solve_triangular(lower, rows.T, lower=True)
    return np.einsum("ij,ij->j", sol, sol)


def cov_to_corr(cov: np.ndarray) -> np.ndarray:
    d = np.sqrt(np.diagonal(cov))
    corr = cov / np.outer(d, d)
    np.fill_diagonal(corr, 1.0)
    return 0.5 * (corr + corr.T)
