import math

import numpy as np
import pytest
from hypothesis import given, strategies as hs

from btbm import streams as st
from btbm.errors import InvalidArgumentError
from btbm.gof import two_sample_test
from btbm.paths import InnerPath, LevelSampler, Partition, make_partition
from btbm.processes import (
    ProcessVariant,
    decompose_excursions,
    sample_terminal,
    simulate,
    simulate_batch,
    simulate_terminal,
)


def _inner(vals):
    return InnerPath(Partition(np.arange(len(vals), dtype=float)), np.array(vals, dtype=float))


def test_excursions_single_run():
    assert decompose_excursions(_inner([0, 1, 2, 1])).intervals == ((1, 3),)


def test_excursions_sign_change_splits():
    # every sign change between nonzero neighbours splits, including -1 -> 2
    assert decompose_excursions(_inner([0, 1, -1, 2])).intervals == ((1, 1), (2, 2), (3, 3))
    assert decompose_excursions(_inner([0, 1, -1, -2])).intervals == ((1, 1), (2, 3))


def test_excursions_zero_path():
    assert len(decompose_excursions(_inner([0, 0, 0]))) == 0


def test_excursions_zero_splits():
    assert decompose_excursions(_inner([0, 1, 0, 2, 3])).intervals == ((1, 1), (3, 4))


@given(hs.lists(hs.integers(-3, 3), min_size=1, max_size=40))
def test_excursions_cover_nonzero_points(tail):
    vals = [0] + tail
    dec = decompose_excursions(_inner(vals))
    covered = sorted(k for a, b in dec.intervals for k in range(a, b + 1))
    assert covered == [k for k, v in enumerate(vals) if v != 0]
    for (a, b), (c, _) in zip(dec.intervals, dec.intervals[1:]):
        assert b < c
    for a, b in dec.intervals:
        seg = np.sign(vals[a : b + 1])
        assert np.all(seg == seg[0])


def test_variant_validation():
    with pytest.raises(InvalidArgumentError):
        ProcessVariant.k_excursion(0)
    with pytest.raises(InvalidArgumentError):
        ProcessVariant("other")
    with pytest.raises(InvalidArgumentError):
        ProcessVariant.simple(x=(0.0, 1.0, 2.0), d=2)


@pytest.mark.parametrize("variant", [
    ProcessVariant.simple(1.5), ProcessVariant.k_excursion(3, 1.5), ProcessVariant.inf_excursion(1.5),
])
def test_values_start_at_x(variant):
    s = simulate(variant, make_partition(1.0, 200), st.ReplicateStreams(4, 0))
    assert s.values[0] == 1.5
    assert np.all(s.values[s.clock == 0] == 1.5)


def test_simple_reuses_single_sampler():
    rs = st.ReplicateStreams(8, 1)
    s = simulate(ProcessVariant.simple(), make_partition(1.0, 300), rs)
    expect = LevelSampler().query(s.clock, rs.outer(0))
    assert np.array_equal(s.values, expect)


def test_simulate_deterministic():
    p = make_partition(1.0, 128)
    a = simulate(ProcessVariant.k_excursion(2), p, st.ReplicateStreams(3, 7))
    b = simulate(ProcessVariant.k_excursion(2), p, st.ReplicateStreams(3, 7))
    assert np.array_equal(a.values, b.values)


def test_copy_assignment_ranges():
    p = make_partition(1.0, 2000)
    for i in range(5):
        k = simulate(ProcessVariant.k_excursion(3), p, st.ReplicateStreams(2, i)).excursions
        assert set(k.copy_assignment) <= {0, 1, 2}
        inf = simulate(ProcessVariant.inf_excursion(), p, st.ReplicateStreams(2, i)).excursions
        assert len(set(inf.copy_assignment)) == len(inf)


def test_same_level_same_copy_same_value():
    # within one excursion (same copy), equal clock levels give equal values
    inner_vals = np.array([0.0, 0.5, 1.0, 0.5, 1.0, -0.5, -1.0, -0.5])
    p = Partition(np.arange(inner_vals.size, dtype=float))
    from btbm import processes

    rs = st.ReplicateStreams(1, 0)
    orig = processes.sample_inner_path
    processes.sample_inner_path = lambda part, g, seed_tag=None: InnerPath(part, inner_vals, seed_tag)
    try:
        s = processes.simulate(ProcessVariant.k_excursion(2), p, rs)
    finally:
        processes.sample_inner_path = orig
    v = s.values
    assert v[1] == v[3] and v[2] == v[4]
    assert v[5] == v[7]


def test_terminal_fourth_moment():
    x, clock = sample_terminal(ProcessVariant.simple(), 1.0, 100_000, 21)
    assert np.all(clock >= 0)
    m, se = np.mean(x ** 4), np.std(x ** 4) / math.sqrt(x.size)
    assert abs(m - 3.0) < 3 * se


def test_terminal_second_and_first_moment():
    # E X^2 = E|B_1| = sqrt(2/pi); E|X| = 2^{3/4} Gamma(3/4) / pi
    x, _ = sample_terminal(ProcessVariant.simple(), 1.0, 100_000, 22)
    for v, target in ((x ** 2, 0.7978845608028654), (np.abs(x), 0.6560038973337529)):
        assert abs(v.mean() - target) < 3 * v.std() / math.sqrt(v.size)


def test_simulate_terminal_fast_path_law():
    out = [simulate_terminal(ProcessVariant.simple(), 1.0, 8, st.ReplicateStreams(5, i)) for i in range(3000)]
    x = np.array([o[0] for o in out])
    bulk, _ = sample_terminal(ProcessVariant.simple(), 1.0, 3000, 6)
    assert two_sample_test(x, bulk).pvalue > 0.001
    assert all(o[1] >= 0 for o in out)


def test_batch_matches_path_law():
    p = make_partition(1.0, 64)
    b = simulate_batch(ProcessVariant.k_excursion(2), p, 4, 3000)
    x_single = np.array([simulate(ProcessVariant.k_excursion(2), p, st.ReplicateStreams(9, i)).values[-1]
                         for i in range(3000)])
    assert two_sample_test(b.values[:, -1], x_single).pvalue > 0.001


def test_batch_blocks_are_independent_of_size():
    p = make_partition(1.0, 16)
    a = simulate_batch(ProcessVariant.inf_excursion(), p, 3, 20)
    b = simulate_batch(ProcessVariant.inf_excursion(), p, 3, 50)
    assert np.array_equal(a.values, b.values[:20])


def test_k1_equals_simple_in_law():
    p = make_partition(1.0, 64)
    a = simulate_batch(ProcessVariant.k_excursion(1), p, 1, 20_000).values[:, -1]
    b = simulate_batch(ProcessVariant.simple(), p, 2, 20_000).values[:, -1]
    assert two_sample_test(a, b).pvalue > 0.001


def test_k2_vs_simple_terminal():
    a, _ = sample_terminal(ProcessVariant.k_excursion(2), 1.0, 100_000, 31)
    b, _ = sample_terminal(ProcessVariant.simple(), 1.0, 100_000, 32)
    assert two_sample_test(a, b).pvalue > 0.01


def test_multidimensional_components_uncorrelated():
    v = ProcessVariant.simple(d=2)
    x, _ = sample_terminal(v, 1.0, 100_000, 41)
    c = np.mean(x[:, 0] * x[:, 1])
    se = np.std(x[:, 0] * x[:, 1]) / math.sqrt(x.shape[0])
    assert abs(c) < 4 * se
    s = simulate(ProcessVariant.inf_excursion(d=3), make_partition(1.0, 50), st.ReplicateStreams(1, 1))
    assert s.values.shape == (51, 3)
