"""Brute-force verification oracles.

Monte-Carlo moment estimation with standard errors, Gauss-Legendre
normalization checks, a bisection reference for the Lambert W function,
and Kolmogorov-Smirnov tests.  Everything here is deliberately
independent of the closed-form implementations elsewhere in the package
(bisection instead of Halley, quadrature instead of algebra, sampling
instead of formulas): the test-suite uses these as ground truth, and
they ship with the package so acceptance runs are self-contained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import stats

__all__ = [
    "McEstimate",
    "mc_moments",
    "mc_statistic",
    "quad_normalization",
    "w0_reference",
    "ks_test",
]


@dataclass(frozen=True)
class McEstimate:
    """A Monte-Carlo estimate with its standard error."""

    value: float
    stderr: float
    n: int

    def __post_init__(self) -> None:
        if self.stderr < 0:
            raise ValueError("stderr must be nonnegative")
        if self.n < 2:
            raise ValueError("n must be at least 2")


def _chunk_seeds(seed: int, chunks: int) -> np.ndarray:
    return np.random.SeedSequence(seed).generate_state(chunks, np.uint64)


def mc_moments(sampler: Callable[[int, int], np.ndarray], n: int,
               orders: Sequence, *, seed: int = 0,
               chunk_size: int = 200_000) -> Mapping[tuple, McEstimate]:
    """Sample means of monomials with CLT standard errors.

    ``sampler(n, seed)`` must return an (n, p) array; ``orders`` is a
    sequence of length-p integer tuples of monomial exponents (a bare
    int is accepted when p = 1).  Sampling is chunked with per-chunk
    derived seeds, so results are reproducible and memory stays flat.
    """
    if n < 1000:
        raise ValueError("mc_moments needs n >= 1000")
    keys = list(orders)
    exps = [np.atleast_1d(np.asarray(k, dtype=int)) for k in keys]
    sums = np.zeros(len(keys))
    sq_sums = np.zeros(len(keys))

    n_chunks = max(1, math.ceil(n / chunk_size))
    seeds = _chunk_seeds(seed, n_chunks)
    produced = 0
    for c in range(n_chunks):
        take = min(chunk_size, n - produced)
        x = np.asarray(sampler(take, int(seeds[c])), dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        produced += take
        for i, e in enumerate(exps):
            mono = np.prod(x ** e, axis=1)
            sums[i] += mono.sum()
            sq_sums[i] += (mono * mono).sum()

    out = {}
    for i, key in enumerate(keys):
        mean = sums[i] / n
        var = max(0.0, (sq_sums[i] / n - mean * mean)) * n / (n - 1)
        out[key] = McEstimate(float(mean), float(np.sqrt(var / n)), n)
    return out


def mc_statistic(sampler: Callable[[int, int], np.ndarray], n: int,
                 stat: Callable[[np.ndarray], float], *, batches: int = 16,
                 seed: int = 0) -> McEstimate:
    """Batch-means estimate of an arbitrary sample statistic.

    The total budget ``n`` is split over ``batches`` independent
    samples; the spread of the per-batch statistics gives the standard
    error.  Use this for nonlinear statistics (skewness, kurtosis,
    central covariances) where per-draw CLT errors do not apply.
    """
    if batches < 2:
        raise ValueError("need at least 2 batches")
    per = n // batches
    if per < 2:
        raise ValueError("n too small for the requested batches")
    seeds = _chunk_seeds(seed, batches)
    vals = np.array([stat(np.asarray(sampler(per, int(seeds[b]))))
                     for b in range(batches)], dtype=float)
    return McEstimate(float(vals.mean()),
                      float(vals.std(ddof=1) / np.sqrt(batches)),
                      per * batches)


def _eval_log_pdf(log_pdf: Callable, pts: np.ndarray) -> np.ndarray:
    """Evaluate a log-density on (m, dim) points, tolerating handles
    that only accept a single point."""
    try:
        out = np.asarray(log_pdf(pts), dtype=float)
        if out.shape == (pts.shape[0],):
            return out
    except Exception:
        pass
    return np.array([np.asarray(log_pdf(p), dtype=float).item()
                     for p in pts])


@lru_cache(maxsize=8)
def _leggauss(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    # computing the rule costs O(nodes^2); normalization sweeps reuse it
    t, wt = np.polynomial.legendre.leggauss(nodes)
    return t, wt


def quad_normalization(log_pdf: Callable, dim: int, box, nodes: int, *,
                       tan_map: bool = False) -> float:
    """Gauss-Legendre tensor integral of exp(log_pdf); should be ~1.

    ``box`` is (a, b) for dim 1 or ((a1, b1), (a2, b2)) for dim 2.  With
    ``tan_map=True`` each axis is mapped through y = m + c*tan(u) (m the
    box midpoint, c its half-width), which integrates over the whole
    real line; use it for tails too heavy for any finite box.
    """
    if dim not in (1, 2):
        raise ValueError("quad_normalization supports dim 1 or 2")
    boxes = np.asarray(box, dtype=float)
    if boxes.ndim == 1:
        boxes = boxes[None, :]
    if boxes.shape != (dim, 2):
        raise ValueError("box must give (min, max) per axis")

    t, wt = _leggauss(nodes)
    axes, weights = [], []
    for (a, b) in boxes:
        if tan_map:
            u = 0.5 * np.pi * t
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            axes.append(mid + half * np.tan(u))
            weights.append(wt * 0.5 * np.pi * half / np.cos(u) ** 2)
        else:
            axes.append(0.5 * (b - a) * t + 0.5 * (a + b))
            weights.append(wt * 0.5 * (b - a))

    if dim == 1:
        pts = axes[0][:, None]
        w = weights[0]
    else:
        g1, g2 = np.meshgrid(axes[0], axes[1], indexing="ij")
        pts = np.column_stack([g1.ravel(), g2.ravel()])
        w = np.outer(weights[0], weights[1]).ravel()

    logs = _eval_log_pdf(log_pdf, pts)
    with np.errstate(under="ignore"):
        vals = np.exp(logs)
    return float(np.sum(w * vals))


def w0_reference(x: float) -> float:
    """Bisection solution of w * exp(w) = x for x >= 0, to ~1e-13.

    Ground truth for lambert_w0; shares no code with it.
    """
    x = float(x)
    if not np.isfinite(x) or x < 0.0:
        raise ValueError("w0_reference requires finite x >= 0")
    if x == 0.0:
        return 0.0
    lo, hi = 0.0, max(1.0, np.log1p(x) + 2.0)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid * np.exp(mid) < x:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14:
            break
    return 0.5 * (lo + hi)


def ks_test(sample_a, reference) -> float:
    """Asymptotic Kolmogorov-Smirnov p-value.

    ``reference`` is either a CDF callable (one-sample test) or a second
    sample (two-sample test).
    """
    a = np.asarray(sample_a, dtype=float).ravel()
    if a.size < 20:
        raise ValueError("ks_test needs at least 20 observations")
    if callable(reference):
        res = stats.kstest(a, reference, method="asymp")
    else:
        b = np.asarray(reference, dtype=float).ravel()
        if b.size < 20:
            raise ValueError("ks_test needs at least 20 observations")
        res = stats.ks_2samp(a, b, method="asymp")
    return float(res.pvalue)
