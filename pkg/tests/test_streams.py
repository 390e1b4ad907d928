import numpy as np
import pytest

from btbm import streams as st


def test_same_key_same_stream():
    a = st.make_stream(5, st.OUTER, 3, 1).standard_normal(10)
    b = st.make_stream(5, st.OUTER, 3, 1).standard_normal(10)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("other", [
    dict(seed=6), dict(role=st.INNER), dict(index=4), dict(sub=2), dict(scope=st.BLOCK),
])
def test_key_components_separate_streams(other):
    base = dict(seed=5, role=st.OUTER, index=3, sub=1, scope=st.REPLICATE)
    a = st.make_stream(**base).standard_normal(8)
    b = st.make_stream(**{**base, **other}).standard_normal(8)
    assert not np.array_equal(a, b)


def test_draws_do_not_depend_on_chunking():
    g = st.make_stream(1, st.INNER, 0)
    whole = g.standard_normal(1000)
    g = st.make_stream(1, st.INNER, 0)
    parts = np.concatenate([g.standard_normal(300), g.standard_normal(700)])
    assert np.array_equal(whole, parts)


def test_negative_seed_rejected():
    with pytest.raises(ValueError):
        st.make_stream(-1, st.INNER, 0)


def test_blocks_cover_range():
    got = list(st.blocks(40_000, 16384))
    assert got == [(0, 0, 16384), (1, 16384, 32768), (2, 32768, 40000)]


def test_replicate_streams_roles():
    rs = st.ReplicateStreams(9, 2)
    assert np.array_equal(rs.inner().random(4), st.make_stream(9, st.INNER, 2).random(4))
    assert np.array_equal(rs.outer(3).random(4), st.make_stream(9, st.OUTER, 2, 3).random(4))
    assert np.array_equal(rs.role("choice").random(4), rs.choice().random(4))


def test_derive_seed_stable_and_distinct():
    assert st.derive_seed(1, 2, 3) == st.derive_seed(1, 2, 3)
    assert st.derive_seed(1, 2, 3) != st.derive_seed(1, 2, 4)
    assert 0 <= st.derive_seed(1, 0) < 2 ** 63
