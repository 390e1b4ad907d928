"""Inner Brownian paths on time grids and the outer Brownian motion sampled
at arbitrary clock levels.

The outer process is served by :class:`LevelSampler`, which keeps every
level it has ever produced.  A new level between two known levels is drawn
from the Brownian bridge between them; a level beyond the largest known one
is a free Brownian extension.  Requests are sorted before any draw, so the
result of a query does not depend on the order of the requested levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class Partition:
    """Ordered grid ``0 = t_0 <= t_1 <= ... <= t_n = t``."""

    times: np.ndarray
    mesh: float = field(init=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if times.ndim != 1 or times.size < 2:
            raise InvalidArgumentError("a partition needs at least two times")
        if times[0] != 0.0:
            raise InvalidArgumentError("a partition must start at 0")
        gaps = np.diff(times)
        if np.any(gaps < 0) or not np.all(np.isfinite(times)):
            raise InvalidArgumentError("partition times must be finite and non-decreasing")
        times.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "mesh", float(gaps.max()))

    @property
    def t(self) -> float:
        return float(self.times[-1])

    @property
    def n(self) -> int:
        """Number of intervals."""
        return self.times.size - 1

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(self.times)

    def __len__(self):
        return self.times.size


def make_partition(t: float, n: int, scheme: str = "uniform") -> Partition:
    """Uniform grid of ``[0, t]`` with ``n`` intervals.

    ``scheme="dyadic"`` is the uniform grid restricted to ``n = 2**m``.
    """
    if not (t > 0) or not np.isfinite(t):
        raise InvalidArgumentError(f"t must be positive, got {t!r}")
    if int(n) != n or n < 1:
        raise InvalidArgumentError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    if scheme == "dyadic":
        if n & (n - 1):
            raise InvalidArgumentError(f"dyadic partitions need n = 2**m, got {n}")
    elif scheme != "uniform":
        raise InvalidArgumentError(f"unknown partition scheme {scheme!r}")
    times = t * (np.arange(n + 1, dtype=float) / n)
    times[-1] = t
    return Partition(times)


@dataclass(frozen=True)
class InnerPath:
    """Discretised inner Brownian motion ``B`` on a partition."""

    partition: Partition
    values: np.ndarray
    seed_tag: Any = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.partition.times.shape:
            raise InvalidArgumentError("inner path values must match the partition")
        if values[0] != 0.0:
            raise InvalidArgumentError("the inner path starts at 0")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def reflected(self) -> np.ndarray:
        """The clock ``|B(t_k)|``."""
        return np.abs(self.values)


def sample_inner_path(partition: Partition, rng: np.random.Generator, seed_tag=None) -> InnerPath:
    """Brownian motion from 0 with independent ``N(0, gap)`` increments."""
    incr = np.sqrt(partition.gaps) * rng.standard_normal(partition.n)
    values = np.empty(partition.n + 1)
    values[0] = 0.0
    np.cumsum(incr, out=values[1:])
    return InnerPath(partition, values, seed_tag)


def refine_inner_path(inner: InnerPath, rng: np.random.Generator) -> InnerPath:
    """Insert the midpoint of every interval by Brownian-bridge sampling.

    The coarse values are kept, so the result is a dyadic refinement of the
    same path.
    """
    times = inner.partition.times
    gaps = np.diff(times)
    mid_t = times[:-1] + 0.5 * gaps
    mean = 0.5 * (inner.values[:-1] + inner.values[1:])
    mid = mean + 0.5 * np.sqrt(gaps) * rng.standard_normal(gaps.size)
    new_t = np.empty(2 * times.size - 1)
    new_v = np.empty_like(new_t)
    new_t[0::2], new_t[1::2] = times, mid_t
    new_v[0::2], new_v[1::2] = inner.values, mid
    return InnerPath(Partition(new_t), new_v, inner.seed_tag)


def subsample_inner_path(inner: InnerPath, step: int) -> InnerPath:
    """Keep every ``step``-th grid point (the endpoint must survive)."""
    if (inner.partition.n % step) != 0:
        raise InvalidArgumentError("step must divide the number of intervals")
    return InnerPath(
        Partition(inner.partition.times[::step]), inner.values[::step], inner.seed_tag
    )


def _segmented_cumsum(w: np.ndarray, starts: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Cumulative sums of ``w`` restarted at each index in ``starts``."""
    c = np.cumsum(w, axis=0)
    base = c[starts] - w[starts]
    return c - np.repeat(base, counts, axis=0)


class LevelSampler:
    """Brownian motion ``X`` started at ``x``, evaluated lazily at levels.

    Parameters
    ----------
    x : float or array_like
        Start point ``X(0)``; a vector gives ``dim`` independent components.
    """

    def __init__(self, x=0.0):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.ndim != 1:
            raise InvalidArgumentError("start point must be a scalar or a vector")
        self.dim = x.size
        self._levels = np.zeros(1)
        self._values = x[None, :].copy()

    @property
    def origin(self):
        v = self._values[0]
        return float(v[0]) if self.dim == 1 else v.copy()

    @property
    def known_levels(self) -> np.ndarray:
        return self._levels.copy()

    @property
    def known_values(self) -> np.ndarray:
        return self._values[:, 0].copy() if self.dim == 1 else self._values.copy()

    def __len__(self):
        return self._levels.size

    def query(self, levels, rng: np.random.Generator) -> np.ndarray:
        """Return ``X`` at ``levels``, sampling any level not yet known."""
        q = np.asarray(levels, dtype=float)
        flat = q.ravel()
        if not np.all(np.isfinite(flat)):
            raise InvalidArgumentError("levels must be finite")
        if np.any(flat < 0):
            raise InvalidArgumentError("levels must be non-negative")
        if flat.size:
            uq = np.unique(flat)
            pos = np.searchsorted(self._levels, uq)
            inside = pos < self._levels.size
            known = np.zeros(uq.size, dtype=bool)
            known[inside] = self._levels[pos[inside]] == uq[inside]
            if not known.all():
                self._insert(uq[~known], rng)
        out = self._values[np.searchsorted(self._levels, flat)]
        if self.dim == 1:
            return out[:, 0].reshape(q.shape)
        return out.reshape(q.shape + (self.dim,))

    def _insert(self, new: np.ndarray, rng: np.random.Generator) -> None:
        K, V, d = self._levels, self._values, self.dim
        right = np.searchsorted(K, new)
        interior = right < K.size
        parts_l, parts_v = [K], [V]

        qi, gi = new[interior], right[interior]
        if qi.size:
            groups, first = np.unique(gi, return_index=True)
            counts = np.diff(np.append(first, qi.size))
            rank = np.repeat(np.arange(groups.size), counts)
            # each gap: its new points, then the gap's right end
            pt_pos = np.arange(qi.size) + rank
            end_pos = first + np.arange(groups.size) + counts
            seg_start = first + np.arange(groups.size)
            left = K[groups - 1]
            width = K[groups] - left
            off = np.empty(qi.size + groups.size)
            off[pt_pos] = qi - left[rank]
            off[end_pos] = width
            prev = np.empty_like(off)
            prev[1:] = off[:-1]
            prev[seg_start] = 0.0
            z = rng.standard_normal((off.size, d))
            w = np.sqrt(off - prev)[:, None] * z
            W = _segmented_cumsum(w, seg_start, counts + 1)
            miss = W[end_pos] - (V[groups] - V[groups - 1])
            frac = (off[pt_pos] / width[rank])[:, None]
            vals = V[groups - 1][rank] + W[pt_pos] - frac * miss[rank]
            parts_l.append(qi)
            parts_v.append(vals)

        qb = new[~interior]
        if qb.size:
            steps = np.diff(np.concatenate(([K[-1]], qb)))
            z = rng.standard_normal((qb.size, d))
            vals = V[-1] + np.cumsum(np.sqrt(steps)[:, None] * z, axis=0)
            parts_l.append(qb)
            parts_v.append(vals)

        levels = np.concatenate(parts_l)
        order = np.argsort(levels, kind="stable")
        self._levels = levels[order]
        self._values = np.concatenate(parts_v)[order]


def query_levels(sampler: LevelSampler, levels, rng: np.random.Generator) -> np.ndarray:
    """Functional form of :meth:`LevelSampler.query`."""
    return sampler.query(levels, rng)
