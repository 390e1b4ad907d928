"""Kolmogorov-Smirnov tests, optionally with importance weights."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy import stats

from .errors import InvalidArgumentError

MIN_SAMPLES = 100


class KSResult(NamedTuple):
    statistic: float
    pvalue: float
    n_eff: float


def kish_ess(weights) -> float:
    """Kish effective sample size ``(sum w)^2 / sum w^2``."""
    w = np.asarray(weights, dtype=float)
    m = w.max()
    w = w / m
    return float(w.sum() ** 2 / np.dot(w, w))


def ks_statistic(samples, cdf, weights=None) -> float:
    """Sup distance between the (self-normalised) empirical CDF and ``cdf``."""
    x = np.asarray(samples, dtype=float).ravel()
    order = np.argsort(x, kind="stable")
    x = x[order]
    if weights is None:
        w = np.full(x.size, 1.0 / x.size)
    else:
        w = np.asarray(weights, dtype=float).ravel()[order]
        w = w / w.sum()
    after = np.cumsum(w)
    after[-1] = 1.0
    before = after - w
    F = np.asarray(cdf(x), dtype=float)
    return float(max(np.max(after - F), np.max(F - before), 0.0))


def _multiplier_pvalue(x_sorted, w_sorted, D, n_boot, rng):
    """Gaussian multiplier bootstrap for the weighted KS statistic.

    The self-normalised weighted ECDF has influence terms
    ``psi_i(z) = w_i (1{x_i <= z} - F_w(z)) / sum(w)``; the null law of
    ``sup_z |F_w - F|`` is approximated by ``sup_z |sum_i xi_i psi_i(z)|``
    with independent standard normal multipliers ``xi_i``.
    """
    w = w_sorted / w_sorted.sum()
    Fw = np.cumsum(w)
    keep = np.flatnonzero(w > 0)
    w, Fw = w[keep], Fw[keep]
    exceed = 0
    chunk = max(1, 2_000_000 // max(1, w.size))
    done = 0
    while done < n_boot:
        b = min(chunk, n_boot - done)
        xi = rng.standard_normal((b, w.size)) * w
        S = np.cumsum(xi, axis=1) - Fw * xi.sum(axis=1, keepdims=True)
        exceed += int(np.count_nonzero(np.abs(S).max(axis=1) >= D))
        done += b
    return (1 + exceed) / (n_boot + 1)


def ks_test(samples, cdf, weights=None, n_boot: int = 999, seed: int = 0) -> KSResult:
    """One-sample KS test of ``samples`` against a continuous ``cdf``.

    Unweighted: p-value from the exact finite-``n`` null distribution
    (:data:`scipy.stats.kstwo`).  Weighted: the empirical CDF is
    self-normalised and the p-value comes from a Gaussian multiplier
    bootstrap of the weighted empirical process (``n_boot`` draws, seeded
    by ``seed``).  The Kolmogorov law at the Kish effective sample size is
    not used: importance weights that depend on the sample position make it
    anti-conservative.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < MIN_SAMPLES:
        raise InvalidArgumentError(f"need at least {MIN_SAMPLES} samples, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError("samples must be finite")
    if weights is not None:
        w = np.asarray(weights, dtype=float).ravel()
        if w.shape != x.shape:
            raise InvalidArgumentError("weights must match samples")
        # exp() of very negative log-weights underflows to 0
        if np.any(w < 0) or not np.all(np.isfinite(w)) or not w.sum() > 0:
            raise InvalidArgumentError("weights must be positive and finite")
    D = ks_statistic(x, cdf, weights)
    if weights is None:
        return KSResult(D, float(stats.kstwo.sf(D, x.size)), float(x.size))
    order = np.argsort(x, kind="stable")
    rng = np.random.default_rng(seed)
    p = _multiplier_pvalue(x[order], w[order], D, n_boot, rng)
    return KSResult(D, float(p), kish_ess(w))


def two_sample_test(a, b) -> KSResult:
    """Two-sample KS test (exact/asymptotic choice left to scipy)."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if min(a.size, b.size) < MIN_SAMPLES:
        raise InvalidArgumentError(f"need at least {MIN_SAMPLES} samples per group")
    res = stats.ks_2samp(a, b)
    return KSResult(float(res.statistic), float(res.pvalue), a.size * b.size / (a.size + b.size))
