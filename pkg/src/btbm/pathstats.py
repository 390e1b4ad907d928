"""Pathwise estimators on a discretised path.

Power variations, the conditional fourth variation of a BTBM given its
clock, local time and occupation of the reflected inner path, and the
level-overlap sums that approximate the self-intersection integral
``int (L_t^a)^2 da``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import InvalidArgumentError
from .paths import InnerPath, Partition


@dataclass(frozen=True)
class VariationEstimate:
    p: float
    value: float
    partition_mesh: float
    path_id: object = None


def variation_values(values, p: float) -> np.ndarray:
    """``sum_k |z_k - z_{k-1}|^p`` along the last axis."""
    if not p > 0:
        raise InvalidArgumentError("p must be positive")
    z = np.asarray(values, dtype=float)
    return (np.abs(np.diff(z, axis=-1)) ** p).sum(axis=-1)


def p_variation(path_values, partition: Partition, p: float, path_id=None) -> VariationEstimate:
    """p-th variation of a path over ``partition``; no limit is taken."""
    z = np.asarray(path_values, dtype=float)
    if z.ndim != 1 or z.size != len(partition):
        raise InvalidArgumentError(
            f"path has {z.size} values but the partition has {len(partition)} points"
        )
    return VariationEstimate(float(p), float(variation_values(z, p)), partition.mesh, path_id)


def conditional_fourth_variation(inner: InnerPath) -> float:
    """``E[V^(4) | B] = 3 sum_k (|B_k| - |B_{k-1}|)^2`` for a BTBM on ``inner``.

    Each outer increment over the clock step is Gaussian with variance
    ``||B_k| - |B_{k-1}||`` and has fourth moment three times its square.
    """
    return 3.0 * float(np.sum(np.diff(inner.reflected) ** 2))


def conditional_fourth_variation_variance(inner: InnerPath) -> float:
    """Exact ``Var[V^(4) | B]`` for a BTBM on ``inner`` (O(n^2) memory).

    The outer increments ``Y_i`` are jointly Gaussian given the clock with
    covariance ``c_ij = s_i s_j |I_i & I_j|`` (``s`` the step signs,
    ``I`` the level intervals).  Isserlis gives
    ``Cov(Y_i^4, Y_j^4) = 72 c_ii c_jj c_ij^2 + 24 c_ij^4``.
    """
    lo, hi, d = _level_intervals(inner.reflected)
    ov = np.clip(np.minimum(hi[:, None], hi[None, :]) - np.maximum(lo[:, None], lo[None, :]), 0, None)
    # signs enter only squared or to the fourth power
    return float(np.sum(72.0 * np.outer(d, d) * ov ** 2 + 24.0 * ov ** 4))


def diagonal_variance_bound(inner: InnerPath) -> float:
    """``96 sum_k delta_k^4``: the diagonal (``i = j``) part of the conditional variance."""
    return 96.0 * float(np.sum(np.diff(inner.reflected) ** 4))


# -- local time -----------------------------------------------------------

@dataclass(frozen=True)
class LocalTimeProfile:
    levels: np.ndarray
    values: np.ndarray
    epsilon: float
    t: float

    def integral(self) -> float:
        return float(np.trapezoid(self.values, self.levels))


def default_epsilon(partition: Partition, spacing: Optional[float] = None) -> float:
    """``max(sqrt(mesh), spacing)``: the band must cover one step of the path."""
    eps = float(np.sqrt(partition.mesh))
    return max(eps, spacing) if spacing is not None else eps


def default_levels(inner: InnerPath, epsilon: float) -> np.ndarray:
    """Uniform grid from 0 to ``max|B| + 3 eps`` with spacing ``eps``."""
    top = float(inner.reflected.max()) + 3 * epsilon
    return epsilon * np.arange(int(np.floor(top / epsilon)) + 1)


def _time_below(inner: InnerPath):
    """Sorted left-endpoint levels and the cumulative time spent below each."""
    r = inner.reflected[:-1]
    order = np.argsort(r, kind="stable")
    cum = np.concatenate(([0.0], np.cumsum(inner.partition.gaps[order])))
    return r[order], cum


def local_time(inner: InnerPath, levels=None, epsilon: Optional[float] = None) -> LocalTimeProfile:
    """Band estimator ``(1/2eps) sum_k dt_k 1{a - eps < |B_{k-1}| < a + eps}``."""
    eps = default_epsilon(inner.partition) if epsilon is None else float(epsilon)
    if not eps > 0:
        raise InvalidArgumentError("epsilon must be positive")
    lev = default_levels(inner, eps) if levels is None else np.asarray(levels, dtype=float)
    if lev.ndim != 1 or np.any(np.diff(lev) < 0):
        raise InvalidArgumentError("levels must be a 1-d ascending grid")
    r, cum = _time_below(inner)
    inside = cum[np.searchsorted(r, lev + eps, "left")] - cum[np.searchsorted(r, lev - eps, "right")]
    return LocalTimeProfile(lev, inside / (2 * eps), eps, inner.partition.t)


def occupation_measure(inner: InnerPath, region) -> float:
    """Time spent by ``|B|`` in ``[a1, a2]``, left-endpoint rule."""
    a1, a2 = (float(v) for v in region)
    if a1 > a2:
        raise InvalidArgumentError("region must satisfy a1 <= a2")
    r, cum = _time_below(inner)
    return float(cum[np.searchsorted(r, a2, "right")] - cum[np.searchsorted(r, a1, "left")])


def tanaka_local_time(inner: InnerPath) -> float:
    """``|B_t| - sum_k sign(B_{k-1}) (B_k - B_{k-1})`` with ``sign(0) = 0``."""
    b = inner.values
    return float(abs(b[-1]) - np.sum(np.sign(b[:-1]) * np.diff(b)))


def tanaka_residual(inner: InnerPath, epsilon: Optional[float] = None) -> float:
    """``|L^0 - Tanaka| / t`` with ``L^0`` from :func:`local_time`."""
    prof = local_time(inner, [0.0], epsilon)
    return abs(float(prof.values[0]) - tanaka_local_time(inner)) / inner.partition.t


def self_intersection(inner: InnerPath, levels=None, epsilon: Optional[float] = None) -> float:
    """Trapezoidal ``int (L^a)^2 da`` of the band estimator."""
    prof = local_time(inner, levels, epsilon)
    return float(np.trapezoid(prof.values ** 2, prof.levels))


# -- overlap sums ---------------------------------------------------------

@dataclass(frozen=True)
class OverlapSum:
    """Pairwise overlap sums of the level intervals ``I_k`` of ``|B|``.

    ``value`` weights each pair by the overlap length,
    ``sum delta_i delta_j |I_i & I_j| = int (sum_i 1{a in I_i} delta_i)^2 da``,
    which converges to the self-intersection integral.  ``indicator_value``
    counts each overlapping pair once, ``sum delta_i delta_j 1{I_i & I_j != 0}``
    (closed intervals).
    """

    value: float
    indicator_value: float
    n_intervals: int
    delta_sum: float
    delta_max: float
    delta_sq_sum: float


def _level_intervals(a):
    lo = np.minimum(a[:-1], a[1:])
    hi = np.maximum(a[:-1], a[1:])
    return lo, hi, hi - lo


def _sweep_length(lo, hi, d, zero):
    """``int (sum_i 1{a in I_i} d_i)^2 da`` by sweeping sorted endpoints."""
    pos = list(lo) + list(hi)
    inc = list(d) + [-v for v in d]
    order = sorted(range(len(pos)), key=pos.__getitem__)
    total, f = zero, zero
    for k in range(len(order) - 1):
        f = f + inc[order[k]]
        total = total + f * f * (pos[order[k + 1]] - pos[order[k]])
    return total


def _indicator_fast(lo, hi, d):
    """``sum_i d_i * (sum of d_j over intervals meeting I_i)`` in O(n log n)."""
    o_lo = np.argsort(lo, kind="stable")
    o_hi = np.argsort(hi, kind="stable")
    c_lo = np.concatenate(([0.0], np.cumsum(d[o_lo])))
    c_hi = np.concatenate(([0.0], np.cumsum(d[o_hi])))
    total = c_lo[-1]
    # intervals entirely above I_i: lo_j > hi_i; entirely below: hi_j < lo_i
    above = total - c_lo[np.searchsorted(lo[o_lo], hi, "right")]
    below = c_hi[np.searchsorted(hi[o_hi], lo, "left")]
    return float(np.sum(d * (total - above - below)))


def _indicator_exact(lo, hi, d):
    import bisect

    n = len(d)
    o_lo = sorted(range(n), key=lo.__getitem__)
    o_hi = sorted(range(n), key=hi.__getitem__)
    s_lo = [lo[i] for i in o_lo]
    s_hi = [hi[i] for i in o_hi]
    c_lo, c_hi = [Fraction(0)], [Fraction(0)]
    for i in o_lo:
        c_lo.append(c_lo[-1] + d[i])
    for i in o_hi:
        c_hi.append(c_hi[-1] + d[i])
    total = c_lo[-1]
    out = Fraction(0)
    for i in range(n):
        above = total - c_lo[bisect.bisect_right(s_lo, hi[i])]
        below = c_hi[bisect.bisect_left(s_hi, lo[i])]
        out += d[i] * (total - above - below)
    return out


def overlap_sum(inner: InnerPath, exact: bool = False) -> OverlapSum:
    """Overlap sums of the level intervals in O(n log n).

    With ``exact=True`` the path values are converted to ``Fraction`` (no
    rounding) and both sums are returned as ``Fraction``; this is meant
    for short paths and for comparison against
    :func:`overlap_sum_bruteforce`.
    """
    a = inner.reflected
    n = a.size - 1
    if exact:
        fa = [Fraction(float(v)) for v in a]
        lo = [min(u, v) for u, v in zip(fa[:-1], fa[1:])]
        hi = [max(u, v) for u, v in zip(fa[:-1], fa[1:])]
        d = [h - l for l, h in zip(lo, hi)]
        value = _sweep_length(lo, hi, d, Fraction(0))
        ind = _indicator_exact(lo, hi, d)
        return OverlapSum(value, ind, n, sum(d, Fraction(0)), max(d), sum((v * v for v in d), Fraction(0)))
    lo, hi, d = _level_intervals(a)
    pos = np.concatenate((lo, hi))
    inc = np.concatenate((d, -d))
    order = np.argsort(pos, kind="stable")
    f = np.cumsum(inc[order])
    value = float(np.sum(f[:-1] ** 2 * np.diff(pos[order])))
    return OverlapSum(value, _indicator_fast(lo, hi, d), n, float(d.sum()), float(d.max()), float(d @ d))


def overlap_sum_bruteforce(inner: InnerPath, exact: bool = False):
    """Reference O(n^2) double sums ``(length form, indicator form)``."""
    a = inner.reflected
    conv = (lambda v: Fraction(float(v))) if exact else float
    vals = [conv(v) for v in a]
    lo = [min(u, v) for u, v in zip(vals[:-1], vals[1:])]
    hi = [max(u, v) for u, v in zip(vals[:-1], vals[1:])]
    zero = Fraction(0) if exact else 0.0
    length, ind = zero, zero
    for i in range(len(lo)):
        di = hi[i] - lo[i]
        for j in range(len(lo)):
            dj = hi[j] - lo[j]
            left, right = max(lo[i], lo[j]), min(hi[i], hi[j])
            if left <= right:
                ind += di * dj
                length += di * dj * (right - left)
    return length, ind
