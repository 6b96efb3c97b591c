import math

import numpy as np
import pytest

from conftest import double_enumeration_opt, small_instances
from kcenter_outliers import (
    ContractViolation,
    EuclideanPoints,
    ExplicitMetric,
    GuardRefusal,
    brute_force_opt,
    charikar,
    gonzalez,
    meb,
    phi_eps,
    synth,
)
from kcenter_outliers.baselines import PAIRWISE_GUARD


# --- gonzalez -----------------------------------------------------------------


def test_gonzalez_line(line):
    ds = line(0, 10, 20)
    E = gonzalez(ds, 2, first=0)
    assert E.ids == (0, 2)
    assert phi_eps(ds, E, 0).radius == 10.0


def test_gonzalez_k_equals_n(line):
    ds = line(0, 4, 9, 13)
    assert phi_eps(ds, gonzalez(ds, 4), 0).radius == 0.0


def test_gonzalez_k1(line):
    ds = line(0, 4, 9, 13)
    assert phi_eps(ds, gonzalez(ds, 1, first=1), 0).radius == 9.0


def test_gonzalez_two_approx_on_small_instances():
    for ds, k, _ in small_instances(60, seed=21, n_max=12):
        r_opt = brute_force_opt(ds, k, 0).r_opt
        for first in range(0, ds.n, 3):
            assert phi_eps(ds, gonzalez(ds, k, first), 0).radius <= 2 * r_opt + 1e-12


def test_gonzalez_errors(line):
    with pytest.raises(ContractViolation):
        gonzalez(line(0, 1), 3)


# --- charikar -----------------------------------------------------------------


def test_charikar_identical_points():
    ds = EuclideanPoints(np.zeros((8, 2)))
    assert phi_eps(ds, charikar(ds, 2, 1), 1).radius == 0.0


def test_charikar_line(line):
    ds = line(0, 1, 2, 100)
    assert brute_force_opt(ds, 1, 1).r_opt == 1.0
    assert phi_eps(ds, charikar(ds, 1, 1), 1).radius <= 3.0


def test_charikar_planted():
    inst = synth(200, 2, 3, 10, seed=4)
    E = charikar(inst.dataset, 3, 10)
    assert len(E) == 3
    assert phi_eps(inst.dataset, E, 10).radius <= 3 * inst.r_opt


def test_charikar_three_approx_random_metrics():
    for ds, k, z in small_instances(100, seed=22, n_max=25):
        r_opt = brute_force_opt(ds, k, z).r_opt
        assert phi_eps(ds, charikar(ds, k, z), z).radius <= 3 * r_opt + 1e-12


def test_charikar_weighted_matches_unit_copies():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(12, 2))
    w = rng.integers(1, 4, size=12)
    expanded = EuclideanPoints(np.repeat(X, w, axis=0))
    ds = EuclideanPoints(X)
    z = 3
    E = charikar(ds, 2, z, sample_weight=w)
    r_opt = brute_force_opt(expanded, 2, z).r_opt
    # evaluate on the copies: weighted points count w times
    owner = np.repeat(np.arange(12), w)
    E_expanded = [int(np.flatnonzero(owner == c)[0]) for c in E]
    assert phi_eps(expanded, E_expanded, z).radius <= 3 * r_opt + 1e-12


def test_charikar_k_at_least_n(line):
    ds = line(0, 5, 9)
    assert set(charikar(ds, 5, 0).ids) == {0, 1, 2}


def test_charikar_guard():
    ds = EuclideanPoints(np.zeros((PAIRWISE_GUARD + 1, 1)))
    with pytest.raises(GuardRefusal):
        charikar(ds, 2, 1)


# --- brute_force_opt --------------------------------------------------------


def test_brute_force_line(line):
    ds = line(0, 1, 2, 100)
    res = brute_force_opt(ds, 1, 1)
    assert res.r_opt == 1.0
    assert res.opt_centers.ids == (1,)
    assert res.opt_excluded.tolist() == [3]


def test_brute_force_k_equals_n(line):
    assert brute_force_opt(line(0, 3, 7), 3, 0).r_opt == 0.0


def test_brute_force_all_but_one_excluded(line):
    assert brute_force_opt(line(0, 3, 7, 20), 1, 3).r_opt == 0.0


def test_brute_force_matches_double_enumeration_tiny():
    for ds, k, z in small_instances(60, seed=23, n_max=8, n_min=2):
        assert brute_force_opt(ds, k, z).r_opt == double_enumeration_opt(ds.pairwise(), k, z)


def test_brute_force_result_is_consistent():
    for ds, k, z in small_instances(20, seed=24, n_max=12):
        res = brute_force_opt(ds, k, z)
        assert phi_eps(ds, res.opt_centers, z).radius == res.r_opt
        assert res.opt_excluded.size == z


def test_brute_force_guard():
    ds = EuclideanPoints(np.zeros((200, 1)))
    with pytest.raises(GuardRefusal):
        brute_force_opt(ds, 5, 0)
    with pytest.raises(GuardRefusal):
        brute_force_opt(EuclideanPoints(np.zeros((30, 1))), 3, 0, guard=100)


def test_brute_force_errors(line):
    with pytest.raises(ContractViolation):
        brute_force_opt(line(0, 1), 3, 0)
    with pytest.raises(ContractViolation):
        brute_force_opt(line(0, 1), 1, 2)


# --- meb --------------------------------------------------------------------


def test_meb_single_point():
    c, r = meb(np.array([[3.0, -1.0]]))
    np.testing.assert_array_equal(c, [3.0, -1.0])
    assert r == 0.0


def test_meb_segment():
    c, r = meb(np.array([[-1.0], [1.0]]), delta=0.01)
    assert abs(c[0]) <= 0.02
    assert 1.0 - 1e-9 <= r <= 1.01


def test_meb_equilateral_triangle():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
    _, r = meb(pts, delta=0.01)
    true = 1 / math.sqrt(3)
    assert true - 1e-9 <= r <= 1.01 * true


def test_meb_square_and_cube():
    sq = np.array([[0, 0], [2, 0], [0, 2], [2, 2]], dtype=float)
    _, r = meb(sq, delta=0.01)
    assert math.sqrt(2) - 1e-9 <= r <= 1.01 * math.sqrt(2)
    cube = np.array([[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)], dtype=float)
    _, r = meb(cube, delta=0.01)
    assert math.sqrt(3) / 2 - 1e-9 <= r <= 1.01 * math.sqrt(3) / 2


def test_meb_encloses_points():
    pts = np.random.default_rng(0).normal(size=(300, 5))
    c, r = meb(pts, delta=0.05)
    assert np.all(np.linalg.norm(pts - c, axis=1) <= r + 1e-12)


def test_meb_errors():
    with pytest.raises(ContractViolation):
        meb(np.zeros((0, 2)))
    with pytest.raises(ContractViolation):
        meb(np.zeros((2, 2)), delta=1.5)


def test_explicit_metric_inputs_work():
    M = np.array([[0, 1, 4], [1, 0, 3], [4, 3, 0]], dtype=float)
    ds = ExplicitMetric(M)
    assert brute_force_opt(ds, 1, 0).r_opt == 3.0
    assert gonzalez(ds, 2).ids == (0, 2)
