"""Reference algorithms and the exact small-instance oracle."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import CenterSet, Dataset, NearestTracker, check_weights, outlier_cost
from .exceptions import ContractViolation, GuardRefusal

BRUTE_FORCE_GUARD = 10**7
PAIRWISE_GUARD = 6000
_CHUNK = 4096


@dataclass
class OracleResult:
    r_opt: float
    opt_centers: CenterSet
    opt_excluded: np.ndarray


def gonzalez(ds: Dataset, k: int, first: int = 0) -> CenterSet:
    """Farthest-first traversal started at ``first``.

    Each step adds the point with the largest distance to the chosen centers
    (smallest id among ties).  Without outliers the radius is at most twice
    the optimal k-center radius.
    """
    if not 1 <= k <= ds.n:
        raise ContractViolation(f"k must satisfy 1 <= k <= n={ds.n}, got {k}")
    ds._check_id(first)
    tracker = NearestTracker(ds)
    tracker.add([first])
    while len(tracker) < k:
        d = np.where(tracker.is_center, -np.inf, tracker.dists)
        tracker.add([int(np.argmax(d))])
    return CenterSet(tuple(tracker.centers))


def _pairwise(ds: Dataset) -> np.ndarray:
    if ds.n > PAIRWISE_GUARD:
        raise GuardRefusal(f"n={ds.n} exceeds the pairwise-matrix guard of {PAIRWISE_GUARD} points")
    return ds.pairwise()


def charikar(ds: Dataset, k: int, z: int, sample_weight=None) -> CenterSet:
    """Greedy-disk 3-approximation for k-center with ``z`` outliers.

    For a candidate radius ``r`` it picks ``k`` times the point whose
    ``r``-ball holds the most uncovered weight and marks everything within
    ``3r`` of it as covered; ``r`` is feasible when at most ``z`` weight stays
    uncovered.  Every ``r >= r_opt`` is feasible, so a binary search over the
    sorted distinct pairwise distances ends at some ``r <= r_opt``.

    ``sample_weight`` makes each point count as that many unit points, which
    is how the algorithm is run on a coreset.
    """
    n = ds.n
    if k < 1:
        raise ContractViolation(f"k must be >= 1, got {k}")
    w = check_weights(sample_weight, n)
    w = np.ones(n) if w is None else w
    if z < 0 or z >= w.sum():
        raise ContractViolation(f"z must satisfy 0 <= z < total weight, got {z}")
    if k >= n:
        return CenterSet(tuple(range(n)))

    D = _pairwise(ds)
    # D[p, c] is the distance from p to center c; rows of Dc index by center
    Dc = np.ascontiguousarray(D.T)
    radii = np.unique(D)

    def probe(r: float):
        ball = (Dc <= r).astype(np.float64)
        covered = np.zeros(n, dtype=bool)
        chosen: list[int] = []
        for _ in range(k):
            if covered.all():
                break
            gain = ball @ np.where(covered, 0.0, w)
            c = int(np.argmax(gain))
            chosen.append(c)
            covered |= Dc[c] <= 3 * r
        return w[~covered].sum() <= z, chosen

    lo, hi = -1, radii.shape[0] - 1
    ok, best = probe(radii[hi])
    while hi - lo > 1:
        mid = (lo + hi) // 2
        ok, chosen = probe(radii[mid])
        if ok:
            hi, best = mid, chosen
        else:
            lo = mid
    picked = list(dict.fromkeys(best))
    if len(picked) < k:
        taken = set(picked)
        picked += [p for p in range(n) if p not in taken][: k - len(picked)]
    return CenterSet(tuple(picked))


def brute_force_opt(ds: Dataset, k: int, z: int, guard: int = BRUTE_FORCE_GUARD) -> OracleResult:
    """Exact optimum over all ``k``-subsets of input points.

    Each subset is scored by its radius after dropping the ``z`` farthest
    points; the first minimum in lexicographic order of subsets wins.
    """
    n = ds.n
    if not 1 <= k <= n:
        raise ContractViolation(f"k must satisfy 1 <= k <= n={n}, got {k}")
    if not 0 <= z < n:
        raise ContractViolation(f"z must satisfy 0 <= z < n={n}, got {z}")
    count = math.comb(n, k)
    if count > guard:
        raise GuardRefusal(f"C({n},{k}) = {count} center sets exceeds the enumeration guard of {guard}")
    Dc = np.ascontiguousarray(_pairwise(ds).T)
    position = n - z - 1

    best_r, best_combo = math.inf, None
    combos = itertools.combinations(range(n), k)
    while True:
        chunk = np.array(list(itertools.islice(combos, _CHUNK)), dtype=np.intp)
        if chunk.size == 0:
            break
        nearest = Dc[chunk[:, 0]]
        for j in range(1, k):
            nearest = np.minimum(nearest, Dc[chunk[:, j]])
        radius = np.partition(nearest, position, axis=1)[:, position]
        i = int(np.argmin(radius))
        if radius[i] < best_r:
            best_r, best_combo = float(radius[i]), chunk[i]

    tracker = NearestTracker(ds)
    tracker.add(best_combo)
    cost = outlier_cost(tracker.dists, z)
    return OracleResult(r_opt=best_r, opt_centers=CenterSet(tuple(best_combo)), opt_excluded=cost.excluded)


def meb(points, delta: float = 0.01, iterations: Optional[int] = None) -> tuple[np.ndarray, float]:
    """Approximate minimum enclosing ball by the Badoiu-Clarkson iteration.

    Starting from the first point, iteration ``i`` moves the center a
    ``1 / (i + 1)`` fraction towards the current farthest point; after
    ``ceil(1 / delta**2)`` iterations the radius is within ``1 + delta`` of
    optimal.  The returned radius is the exact farthest distance from the
    returned center, so the ball always encloses every point.

    Distances are tracked through inner products with cached Gram columns;
    the farthest points repeat, so most iterations cost ``O(m)``, not ``O(mD)``.
    """
    P = np.asarray(points, dtype=np.float64)
    if P.ndim == 1:
        P = P[:, None]
    if P.shape[0] == 0:
        raise ContractViolation("meb needs at least one point")
    if not 0 < delta < 1:
        raise ContractViolation(f"delta must lie in (0, 1), got {delta}")
    if iterations is None:
        iterations = math.ceil(1.0 / delta**2)

    shift = P.mean(axis=0)
    Y = P - shift
    sq = np.einsum("ij,ij->i", Y, Y)
    cache: dict[int, np.ndarray] = {}

    def column(p: int) -> np.ndarray:
        col = cache.get(p)
        if col is None:
            col = cache[p] = Y @ Y[p]
        return col

    c = Y[0].copy()
    yc = column(0).copy()
    for i in range(1, iterations + 1):
        d2 = sq - 2.0 * yc + c @ c
        p = int(np.argmax(d2))
        a = 1.0 / (i + 1)
        c = (1.0 - a) * c + a * Y[p]
        yc = (1.0 - a) * yc + a * column(p)

    center = c + shift
    diff = P - center
    radius = float(np.sqrt(np.einsum("ij,ij->i", diff, diff).max()))
    return center, radius
