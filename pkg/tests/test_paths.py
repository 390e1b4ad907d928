import numpy as np
import pytest
from hypothesis import given, strategies as hs

from btbm import streams as st
from btbm.errors import InvalidArgumentError
from btbm.paths import (
    InnerPath,
    LevelSampler,
    Partition,
    make_partition,
    query_levels,
    refine_inner_path,
    sample_inner_path,
    subsample_inner_path,
)


def test_partition_single_interval():
    p = make_partition(1.0, 1)
    assert p.times.tolist() == [0.0, 1.0]
    assert p.mesh == 1.0


def test_partition_four_intervals():
    p = make_partition(1.0, 4)
    assert p.times.tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert p.mesh == 0.25


def test_partition_dyadic_mesh():
    assert make_partition(2.0, 2 ** 10, "dyadic").mesh == 0.001953125


@pytest.mark.parametrize("t,n", [(0.0, 4), (-1.0, 4), (1.0, 0), (1.0, 2.5)])
def test_partition_rejects_bad_input(t, n):
    with pytest.raises(InvalidArgumentError):
        make_partition(t, n)


def test_dyadic_requires_power_of_two():
    with pytest.raises(InvalidArgumentError):
        make_partition(1.0, 6, "dyadic")


@pytest.mark.parametrize("times", [[0.0], [0.1, 1.0], [0.0, 0.5, 0.4], [0.0, np.inf]])
def test_partition_invariants_enforced(times):
    with pytest.raises(InvalidArgumentError):
        Partition(np.array(times))


@given(hs.floats(1e-3, 1e3), hs.integers(1, 5000))
def test_partition_gaps_sum_and_mesh(t, n):
    p = make_partition(t, n)
    assert abs(p.gaps.sum() - t) <= n * np.finfo(float).eps * t
    assert p.mesh == np.diff(p.times).max()
    assert p.times[0] == 0.0 and p.times[-1] == t


def test_inner_path_starts_at_zero(rng):
    for _ in range(20):
        assert sample_inner_path(make_partition(1.0, 1), rng).values[0] == 0.0
    with pytest.raises(InvalidArgumentError):
        InnerPath(make_partition(1.0, 1), np.array([0.1, 0.2]))


def test_inner_path_terminal_moments():
    # Var B(1) = 1 and E B(1)^4 = 3
    p = make_partition(1.0, 1)
    b1 = np.array([sample_inner_path(p, st.make_stream(7, st.INNER, i)).values[1] for i in range(100_000)])
    assert abs(b1.var() - 1.0) < 0.02
    assert abs(np.mean(b1 ** 4) - 3.0) < 0.1


def test_inner_path_deterministic():
    p = make_partition(1.0, 64)
    a = sample_inner_path(p, st.make_stream(3, st.INNER, 5))
    b = sample_inner_path(p, st.make_stream(3, st.INNER, 5))
    assert np.array_equal(a.values, b.values)


def test_refinement_keeps_coarse_points_and_bridge_law():
    p = make_partition(1.0, 2)
    base = InnerPath(p, np.array([0.0, 1.0, 0.0]))
    g = np.random.default_rng(0)
    mids = []
    for _ in range(20_000):
        r = refine_inner_path(base, g)
        assert np.array_equal(r.values[0::2], base.values)
        mids.append(r.values[1])
    mids = np.array(mids)
    # bridge from 0 to 1 over a gap of 0.5: mean 0.5, variance 0.125
    assert abs(mids.mean() - 0.5) < 4 * np.sqrt(0.125 / mids.size)
    assert abs(mids.var() / 0.125 - 1) < 0.05


def test_subsample():
    g = np.random.default_rng(1)
    inner = sample_inner_path(make_partition(1.0, 8), g)
    s = subsample_inner_path(inner, 4)
    assert s.partition.times.tolist() == [0.0, 0.5, 1.0]
    assert np.array_equal(s.values, inner.values[::4])
    with pytest.raises(InvalidArgumentError):
        subsample_inner_path(inner, 3)


def test_level_sampler_origin_and_repeat(rng):
    s = LevelSampler(0.0)
    assert query_levels(s, [0.0], rng).tolist() == [0.0]
    v = s.query([0.7, 0.7], rng)
    assert v[0] == v[1]
    assert s.query([0.7], rng)[0] == v[0]


def test_level_sampler_start_point(rng):
    s = LevelSampler(2.5)
    assert s.query([0.0], rng)[0] == 2.5
    assert s.origin == 2.5


def test_level_sampler_rejects_negative(rng):
    with pytest.raises(InvalidArgumentError):
        LevelSampler().query([-0.1], rng)
    with pytest.raises(InvalidArgumentError):
        LevelSampler().query([np.nan], rng)


@given(hs.lists(hs.floats(0, 10), min_size=1, max_size=30), hs.randoms(use_true_random=False))
def test_level_sampler_permutation_repeatability(levels, pyrand):
    g = np.random.default_rng(pyrand.randint(0, 2 ** 32))
    s = LevelSampler()
    first = s.query(levels, g)
    perm = list(levels)
    pyrand.shuffle(perm)
    again = s.query(perm, g)
    lookup = dict(zip(perm, again))
    assert all(lookup[a] == b for a, b in zip(levels, first))
    assert np.all(np.diff(s.known_levels) > 0)


def test_level_sampler_covariance():
    # Cov(X(1), X(2)) = min(1, 2) = 1
    x = np.array([LevelSampler().query([1.0, 2.0], st.make_stream(11, st.OUTER, i)) for i in range(100_000)])
    c = np.cov(x.T)
    assert abs(c[0, 1] - 1.0) < 0.03
    assert abs(c[0, 0] - 1.0) < 4 * np.sqrt(2 / x.shape[0])
    assert abs(c[1, 1] - 2.0) < 4 * 2 * np.sqrt(2 / x.shape[0])


def test_level_sampler_bridge_insertion_law():
    # insert 1 between known 0.5 and 2: bridge mean and variance
    vals = []
    for i in range(40_000):
        g = st.make_stream(13, st.OUTER, i)
        s = LevelSampler()
        a, c = s.query([0.5, 2.0], g)
        b = s.query([1.0], g)[0]
        vals.append((a, b, c))
    a, b, c = np.array(vals).T
    resid = b - (a + (1.0 - 0.5) / 1.5 * (c - a))
    var = 0.5 * 1.0 / 1.5
    assert abs(resid.mean()) < 4 * np.sqrt(var / resid.size)
    assert abs(resid.var() / var - 1) < 0.04
    # joint law of the three values is Brownian: Cov = min(s_i, s_j)
    cov = np.cov(np.vstack([a, b, c]))
    expect = np.minimum.outer([0.5, 1.0, 2.0], [0.5, 1.0, 2.0])
    assert np.max(np.abs(cov - expect)) < 0.05


def test_level_sampler_vector_start(rng):
    s = LevelSampler([1.0, -1.0])
    out = s.query([0.0, 0.3], rng)
    assert out.shape == (2, 2)
    assert out[0].tolist() == [1.0, -1.0]


def test_level_sampler_insertions_independent_of_batching():
    # the law is the same either way; the stored values are consistent
    g = np.random.default_rng(3)
    s = LevelSampler()
    s.query([1.0, 3.0], g)
    s.query([2.0], g)
    s.query([0.5, 2.5, 4.0], g)
    lv = s.known_levels
    assert lv.tolist() == [0.0, 0.5, 1.0, 2.0, 2.5, 3.0, 4.0]
    assert s.known_values[0] == 0.0
