import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kcenter_outliers import ContractViolation, farthest_subset
from kcenter_outliers.selection import farthest_weighted, weighted_prefix

small_ints = st.lists(st.integers(0, 5), min_size=1, max_size=40)


def full_sort_top(d, m):
    order = sorted(range(len(d)), key=lambda i: (-d[i], i))
    return sorted(order[:m])


def test_single_largest():
    assert farthest_subset([5, 1, 3], 1).tolist() == [0]


def test_tie_goes_to_smaller_id():
    assert farthest_subset([5, 5, 3], 1).tolist() == [0]


def test_all():
    assert farthest_subset([1, 2, 3], 3).tolist() == [0, 1, 2]


@pytest.mark.parametrize("m", [0, 4, -1])
def test_bad_m(m):
    with pytest.raises(ContractViolation):
        farthest_subset([1, 2, 3], m)


@given(small_ints, st.data())
def test_matches_full_sort(d, data):
    m = data.draw(st.integers(1, len(d)))
    assert farthest_subset(np.array(d, float), m).tolist() == full_sort_top(d, m)


def test_large_input_many_ties():
    rng = np.random.default_rng(0)
    d = rng.integers(0, 3, size=100_000).astype(float)
    got = farthest_subset(d, 40_000)
    assert got.tolist() == full_sort_top(d.tolist(), 40_000)


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 3)), min_size=1, max_size=30), st.floats(0, 40))
def test_weighted_prefix_is_maximal(pairs, budget):
    d = np.array([p[0] for p in pairs], float)
    w = np.array([p[1] for p in pairs], float)
    got = weighted_prefix(d, w, budget)
    order = sorted(range(d.size), key=lambda i: (-d[i], i))
    total, count = 0.0, 0
    for i in order:
        if total + w[i] > budget:
            break
        total += w[i]
        count += 1
    assert got.tolist() == sorted(order[:count])


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 3)), min_size=1, max_size=30), st.floats(0.5, 40))
def test_farthest_weighted_reaches_budget(pairs, budget):
    d = np.array([p[0] for p in pairs], float)
    w = np.array([p[1] for p in pairs], float)
    if not np.any(w > 0):
        return
    ids, copies = farthest_weighted(d, w, budget)
    assert np.all(w[ids] > 0)
    assert np.all(copies > 0) and np.all(copies <= w[ids])
    # farthest first, ties by id
    keys = list(zip(-d[ids], ids))
    assert keys == sorted(keys)
    total = copies.sum()
    assert total <= max(budget, 0) + 1e-9 or len(ids) == 1
    if total < budget - 1e-9:
        assert len(ids) == np.count_nonzero(w > 0)
    # the prefix is minimal: dropping the last point falls short
    assert copies[:-1].sum() < budget


def test_farthest_weighted_clips_last_point():
    ids, copies = farthest_weighted(np.array([9.0, 5.0, 1.0]), np.array([2.0, 3.0, 1.0]), 3.0)
    assert ids.tolist() == [0, 1]
    assert copies.tolist() == [2.0, 1.0]


def test_farthest_weighted_zero_budget():
    ids, copies = farthest_weighted(np.array([1.0, 4.0]), np.ones(2), 0.0)
    assert ids.tolist() == [1]
