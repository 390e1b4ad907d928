"""Brownian-time processes on a time grid.

Three members of the family share one construction: an inner path ``B``
gives the clock ``|B|``, and an outer Brownian motion is read at the clock.
They differ only in which outer copy serves each excursion of ``|B|``:

* ``simple``: one copy for the whole path;
* ``k``: each excursion picks one of ``k`` copies uniformly at random
  (``k = 2`` is iterated Brownian motion);
* ``inf``: every excursion gets a fresh copy.

Excursions are detected on the grid only: exact zeros and sign changes of
``B`` between neighbouring grid points.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import streams as st
from .errors import InvalidArgumentError
from .paths import (
    InnerPath,
    LevelSampler,
    Partition,
    make_partition,
    sample_inner_path,
)

SIMPLE, K_EXCURSION, INF_EXCURSION = "simple", "k", "inf"


@dataclass(frozen=True)
class ProcessVariant:
    kind: str = SIMPLE
    k: Optional[int] = None
    start_point: float | tuple = 0.0
    dimension: int = 1

    def __post_init__(self):
        if self.kind not in (SIMPLE, K_EXCURSION, INF_EXCURSION):
            raise InvalidArgumentError(f"unknown process kind {self.kind!r}")
        if self.kind == K_EXCURSION:
            if self.k is None or int(self.k) != self.k or self.k < 1:
                raise InvalidArgumentError(f"k must be an integer >= 1, got {self.k!r}")
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise InvalidArgumentError("dimension must be a positive integer")
        x = np.atleast_1d(np.asarray(self.start_point, dtype=float))
        if x.size not in (1, self.dimension):
            raise InvalidArgumentError("start point does not match the dimension")

    @classmethod
    def simple(cls, x=0.0, d=1):
        return cls(SIMPLE, None, x, d)

    @classmethod
    def k_excursion(cls, k, x=0.0, d=1):
        return cls(K_EXCURSION, k, x, d)

    @classmethod
    def inf_excursion(cls, x=0.0, d=1):
        return cls(INF_EXCURSION, None, x, d)

    @property
    def origin(self) -> np.ndarray:
        """Start point as a length-``d`` vector."""
        x = np.atleast_1d(np.asarray(self.start_point, dtype=float))
        return np.broadcast_to(x, (self.dimension,)).copy()

    @property
    def label(self) -> str:
        if self.kind == K_EXCURSION:
            return f"k{self.k}"
        return self.kind


@dataclass(frozen=True)
class ExcursionDecomposition:
    """Maximal grid runs where ``|B| > 0``, as inclusive ``(start, end)``
    index pairs, with the outer copy serving each run."""

    intervals: tuple
    copy_assignment: tuple = ()

    def __len__(self):
        return len(self.intervals)

    def labels(self, size: int) -> np.ndarray:
        """Excursion index per grid point, ``-1`` where the clock is 0."""
        out = np.full(size, -1, dtype=np.int64)
        for j, (a, b) in enumerate(self.intervals):
            out[a : b + 1] = j
        return out


def _excursion_labels(b: np.ndarray) -> np.ndarray:
    """Excursion index per grid point along the last axis (``-1`` at zeros)."""
    nz = b != 0
    sgn = np.sign(b)
    start = nz.copy()
    # continuing an excursion needs a nonzero predecessor of the same sign
    start[..., 1:] &= ~(nz[..., :-1] & (sgn[..., 1:] == sgn[..., :-1]))
    lab = np.cumsum(start, axis=-1) - 1
    return np.where(nz, lab, -1)


def decompose_excursions(inner: InnerPath) -> ExcursionDecomposition:
    """Split the grid into excursions of ``|B|`` away from 0."""
    lab = _excursion_labels(inner.values)
    idx = np.flatnonzero(lab >= 0)
    if idx.size == 0:
        return ExcursionDecomposition(())
    cut = np.flatnonzero(np.diff(lab[idx])) + 1
    starts = idx[np.concatenate(([0], cut))]
    ends = idx[np.concatenate((cut - 1, [idx.size - 1]))]
    intervals = tuple(zip(starts.tolist(), ends.tolist()))
    return ExcursionDecomposition(intervals, tuple(range(len(intervals))))


@dataclass(frozen=True)
class ClockedSample:
    """One realisation of a Brownian-time process on a partition.

    ``values`` has shape ``(n+1,)`` for ``d = 1`` and ``(n+1, d)`` otherwise.
    """

    partition: Partition
    inner: InnerPath
    values: np.ndarray
    variant: ProcessVariant
    excursions: Optional[ExcursionDecomposition] = field(default=None, compare=False)

    @property
    def clock(self) -> np.ndarray:
        return self.inner.reflected


def _copy_assignment(variant, n_exc, rng_choice):
    if variant.kind == SIMPLE:
        return np.zeros(n_exc, dtype=np.int64)
    if variant.kind == INF_EXCURSION:
        return np.arange(n_exc, dtype=np.int64)
    return rng_choice.integers(0, variant.k, size=n_exc)


def simulate(variant: ProcessVariant, partition: Partition, rng_stream: st.ReplicateStreams) -> ClockedSample:
    """Simulate one replicate.

    Every outer copy is a :class:`~btbm.paths.LevelSampler` drawing from the
    replicate's ``outer(copy)`` stream; copy indices for ``k`` come from the
    ``choice`` stream in excursion order.
    """
    inner = sample_inner_path(
        partition, rng_stream.inner(), seed_tag=(rng_stream.seed, rng_stream.replicate)
    )
    dec = decompose_excursions(inner)
    copies = _copy_assignment(variant, len(dec), rng_stream.choice() if variant.kind == K_EXCURSION else None)
    dec = replace(dec, copy_assignment=tuple(copies.tolist()))

    x0 = variant.origin
    clock = inner.reflected
    values = np.broadcast_to(x0, (clock.size, variant.dimension)).copy()
    if variant.kind == SIMPLE:
        values[:] = LevelSampler(x0).query(clock, rng_stream.outer(0)).reshape(values.shape)
    elif len(dec):
        members: dict[int, list] = {}
        for (a, b), c in zip(dec.intervals, copies.tolist()):
            members.setdefault(c, []).append(np.arange(a, b + 1))
        for c in sorted(members):
            idx = np.concatenate(members[c])
            vals = LevelSampler(x0).query(clock[idx], rng_stream.outer(c))
            values[idx] = vals.reshape(idx.size, variant.dimension)
    if variant.dimension == 1:
        values = values[:, 0]
    values.setflags(write=False)
    return ClockedSample(partition, inner, values, variant, dec)


def simulate_terminal(variant: ProcessVariant, t: float, n_grid: int, rng_stream: st.ReplicateStreams):
    """Return ``(X_B(t), |B(t)|)`` for one replicate.

    The simple process needs no grid: ``|B(t)|`` and ``X(|B(t)|)`` are
    drawn exactly.  The excursion variants are simulated on a uniform grid
    of ``n_grid`` intervals and the last grid value is returned.
    """
    if not (t > 0):
        raise InvalidArgumentError("t must be positive")
    if variant.kind == SIMPLE:
        clock = abs(np.sqrt(t) * rng_stream.inner().standard_normal())
        x = LevelSampler(variant.origin).query([clock], rng_stream.outer(0))[0]
        return x, float(clock)
    sample = simulate(variant, make_partition(t, n_grid), rng_stream)
    return sample.values[-1], float(sample.clock[-1])


# ---------------------------------------------------------------------------
# vectorised batches (block-keyed streams)


@dataclass(frozen=True)
class BatchSample:
    """Many replicates on one partition; rows are replicates."""

    partition: Partition
    variant: ProcessVariant
    inner: np.ndarray
    values: np.ndarray

    @property
    def clock(self) -> np.ndarray:
        return np.abs(self.inner)


def _outer_on_rows(clock, group, z, x0):
    """Outer values for a batch of rows.

    ``group[r, k]`` names the outer copy used at grid point ``k`` of row
    ``r`` (``-1`` pins the value to ``x0``).  Within a row, the points of one
    copy are sorted by level and joined by independent Brownian increments,
    consuming ``z[r, j]`` at the ``j``-th sorted point; repeated levels get a
    zero increment and hence the identical value.
    """
    R, m = clock.shape
    order = np.lexsort((clock, group), axis=-1)
    s = np.take_along_axis(clock, order, axis=-1)
    g = np.take_along_axis(group, order, axis=-1)
    new_group = np.ones_like(g, dtype=bool)
    new_group[:, 1:] = g[:, 1:] != g[:, :-1]
    prev = np.zeros_like(s)
    prev[:, 1:] = s[:, :-1]
    prev[new_group] = 0.0
    w = np.sqrt(s - prev)[..., None] * z
    w[g < 0] = 0.0
    c = np.cumsum(w, axis=1)
    # subtract the running total reached before each group starts
    base = np.where(new_group[..., None], c - w, 0.0)
    start_idx = np.where(new_group, np.arange(m)[None, :], 0)
    np.maximum.accumulate(start_idx, axis=1, out=start_idx)
    base = np.take_along_axis(base, start_idx[..., None], axis=1)
    vals = x0 + (c - base)
    vals[g < 0] = x0
    out = np.empty_like(vals)
    np.put_along_axis(out, order[..., None], vals, axis=1)
    return out


def _rows_groups(variant, b, u_choice):
    lab = _excursion_labels(b)
    if variant.kind == SIMPLE:
        return np.where(lab >= 0, 0, -1)
    if variant.kind == INF_EXCURSION:
        return lab
    copies = np.minimum((u_choice * variant.k).astype(np.int64), variant.k - 1)
    safe = np.maximum(lab, 0)
    return np.where(lab >= 0, np.take_along_axis(copies, safe, axis=-1), -1)


def _chunk_rows(n_points, dim, budget=4_000_000):
    return max(1, budget // max(1, n_points * dim))


def simulate_batch(variant: ProcessVariant, partition: Partition, seed: int, n_replicates: int) -> BatchSample:
    """Simulate ``n_replicates`` replicates with block-keyed streams.

    Replicate ``r`` lives in block ``r // BLOCK_SIZE``; each block draws its
    inner increments, copy choices and outer normals from its own streams,
    row by row, so the output does not depend on how blocks are scheduled.
    """
    if n_replicates < 1:
        raise InvalidArgumentError("n_replicates must be positive")
    n, d = partition.n, variant.dimension
    sq = np.sqrt(partition.gaps)
    x0 = variant.origin
    inner = np.empty((n_replicates, n + 1))
    values = np.empty((n_replicates, n + 1, d))
    step = _chunk_rows(n + 1, d)
    for blk, start, stop in st.blocks(n_replicates):
        r_in = st.block_stream(seed, st.INNER, blk)
        r_ch = st.block_stream(seed, st.CHOICE, blk)
        r_out = st.block_stream(seed, st.OUTER, blk)
        for a in range(start, stop, step):
            b_ = min(a + step, stop)
            rows = b_ - a
            B = np.zeros((rows, n + 1))
            np.cumsum(sq * r_in.standard_normal((rows, n)), axis=1, out=B[:, 1:])
            u = r_ch.random((rows, n + 1)) if variant.kind == K_EXCURSION else None
            grp = _rows_groups(variant, B, u)
            z = r_out.standard_normal((rows, n + 1, d))
            inner[a:b_] = B
            values[a:b_] = _outer_on_rows(np.abs(B), grp, z, x0)
    if d == 1:
        values = values[..., 0]
    return BatchSample(partition, variant, inner, values)


def sample_terminal(variant: ProcessVariant, t: float, n_replicates: int, seed: int, n_grid: int = 128):
    """Bulk ``(X_B(t), |B(t)|)`` pairs, block-keyed.

    The simple process is drawn exactly without a grid; the excursion
    variants go through :func:`simulate_batch` on ``n_grid`` intervals.
    Returns arrays ``x`` (shape ``(N,)`` or ``(N, d)``) and ``clock``.
    """
    if not (t > 0):
        raise InvalidArgumentError("t must be positive")
    if n_replicates < 1:
        raise InvalidArgumentError("n_replicates must be positive")
    d = variant.dimension
    if variant.kind != SIMPLE:
        batch = simulate_batch(variant, make_partition(t, n_grid), seed, n_replicates)
        return batch.values[:, -1], batch.clock[:, -1]
    x = np.empty((n_replicates, d))
    clock = np.empty(n_replicates)
    for blk, start, stop in st.blocks(n_replicates):
        rows = stop - start
        clock[start:stop] = np.abs(np.sqrt(t) * st.block_stream(seed, st.INNER, blk).standard_normal(rows))
        z = st.block_stream(seed, st.OUTER, blk).standard_normal((rows, d))
        x[start:stop] = variant.origin + np.sqrt(clock[start:stop])[:, None] * z
    if d == 1:
        x = x[:, 0]
    return x, clock
