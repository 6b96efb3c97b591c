import itertools

import numpy as np
import pytest
from scipy.sparse.csgraph import shortest_path

from kcenter_outliers import EuclideanPoints, ExplicitMetric

# criterion number -> (passed, detail); filled by the acceptance module
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")


def random_metric(n, rng, low=1.0, high=10.0):
    """Shortest-path closure of a random complete graph: always a metric."""
    W = rng.uniform(low, high, size=(n, n))
    W = np.triu(W, 1)
    W = W + W.T
    M = shortest_path(W, method="FW", directed=False)
    np.fill_diagonal(M, 0.0)
    return M


def random_points(n, D, rng, integer=False):
    if integer:
        return rng.integers(0, 6, size=(n, D)).astype(float)
    return rng.normal(size=(n, D)) * rng.uniform(0.5, 5.0)


def small_instances(count, seed, n_max=20, k_max=3, z_max=3, n_min=4):
    """Half Euclidean (D=2), half random metrics; yields (ds, k, z)."""
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        k = int(rng.integers(1, k_max + 1))
        z = int(rng.integers(0, min(z_max, n - 1) + 1))
        if i % 2 == 0:
            ds = EuclideanPoints(random_points(n, 2, rng, integer=i % 4 == 0))
        else:
            ds = ExplicitMetric(random_metric(n, rng))
        yield ds, min(k, n), z


def phi_oracle(dists, budget):
    """Radius after dropping the ``budget`` largest entries, by full sort."""
    d = np.sort(np.asarray(dists, dtype=float))[::-1]
    return float(d[budget:].max()) if budget < d.size else 0.0


def double_enumeration_opt(M, k, z):
    """Optimal radius by enumerating centers and outlier sets independently."""
    n = M.shape[0]
    if k >= n or z >= n - 1 and k >= 1:
        return 0.0
    center_sets = np.array(list(itertools.combinations(range(n), k)))
    nearest = M[:, center_sets].min(axis=2).T  # (num center sets, n)
    best = np.inf
    for out in itertools.combinations(range(n), z):
        keep = np.ones(n, dtype=bool)
        keep[list(out)] = False
        best = min(best, float(nearest[:, keep].max(axis=1).min()))
    return best


def expand_units(dists, weights):
    """Repeat every distance by its integer weight."""
    return np.repeat(np.asarray(dists, dtype=float), np.asarray(weights, dtype=np.int64))


@pytest.fixture
def line():
    def make(*xs):
        return EuclideanPoints(np.asarray(xs, dtype=float)[:, None])

    return make
