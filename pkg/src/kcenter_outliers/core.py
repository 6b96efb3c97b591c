"""Datasets, parameters, distance maintenance and the outlier-aware cost.

Every algorithm in the package picks centers among the input points, so a
center is always a point id in ``[0, n)``.  Costs follow the relaxed
k-center objective: the farthest ``floor((1 + eps) * z)`` points (or that
much weight) are dropped and the radius is the largest remaining distance
to the nearest center.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np

from ._parallel import parallel_map, row_blocks
from .exceptions import ContractViolation, UnsupportedVariant
from .selection import farthest_subset, weighted_prefix

# ---------------------------------------------------------------------------
# datasets


class Dataset:
    """Common interface of the two dataset variants.

    Instances are immutable after construction and safe for concurrent reads.
    """

    n: int

    def dist(self, p: int, q: int) -> float:
        self._check_id(p)
        self._check_id(q)
        return float(self._dist(p, q))

    def distances_to(self, center: int) -> np.ndarray:
        """Distances from every point to point ``center`` (length ``n``)."""
        self._check_id(center)
        return self._column(center)

    def pairwise(self) -> np.ndarray:
        out = np.empty((self.n, self.n))
        for j in range(self.n):
            out[:, j] = self._column(j)
        return out

    def subset(self, ids: Sequence[int]) -> "Dataset":
        raise NotImplementedError

    def _check_id(self, p: int) -> None:
        if not isinstance(p, (int, np.integer)) or not 0 <= p < self.n:
            raise IndexError(f"point id {p!r} out of range [0, {self.n})")

    def _dist(self, p: int, q: int) -> float:
        raise NotImplementedError

    def _column(self, center: int) -> np.ndarray:
        raise NotImplementedError

    def __len__(self) -> int:
        return self.n


def _euclid_rows(rows: np.ndarray, point: np.ndarray) -> np.ndarray:
    diff = rows - point
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


class EuclideanPoints(Dataset):
    """An ``n x D`` matrix of finite coordinates."""

    def __init__(self, coords):
        coords = np.array(coords, dtype=np.float64, copy=True)
        if coords.ndim == 1:
            coords = coords[:, None]
        if coords.ndim != 2 or coords.shape[0] < 1 or coords.shape[1] < 1:
            raise ContractViolation(f"coords must be a non-empty n x D matrix, got shape {coords.shape}")
        if not np.all(np.isfinite(coords)):
            raise ContractViolation("coords contain non-finite values")
        coords.setflags(write=False)
        self.coords = coords
        self.n = coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def _dist(self, p, q):
        # same arithmetic as a column evaluation, so values agree bit-for-bit
        return _euclid_rows(self.coords[p : p + 1], self.coords[q])[0]

    def _column(self, center):
        point = self.coords[center]
        blocks = row_blocks(self.n)
        if len(blocks) == 1:
            return _euclid_rows(self.coords, point)
        parts = parallel_map(lambda blk: _euclid_rows(self.coords[blk], point), blocks)
        return np.concatenate(parts)

    def subset(self, ids):
        return EuclideanPoints(self.coords[np.asarray(ids, dtype=np.intp)])

    def __repr__(self) -> str:
        return f"EuclideanPoints(n={self.n}, D={self.dim})"


class ExplicitMetric(Dataset):
    """An explicit ``n x n`` distance matrix.

    Shape, finiteness and non-negativity are enforced here; symmetry, the zero
    diagonal and the triangle inequality are audited by :func:`validate_metric`.
    """

    def __init__(self, matrix):
        matrix = np.array(matrix, dtype=np.float64, copy=True)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
            raise ContractViolation(f"metric must be a square non-empty matrix, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise ContractViolation("metric contains non-finite values")
        if np.any(matrix < 0):
            raise ContractViolation("metric contains negative distances")
        matrix.setflags(write=False)
        self.matrix = matrix
        self.n = matrix.shape[0]

    def _dist(self, p, q):
        return self.matrix[p, q]

    def _column(self, center):
        return np.ascontiguousarray(self.matrix[:, center])

    def pairwise(self):
        return self.matrix.copy()

    def subset(self, ids):
        ids = np.asarray(ids, dtype=np.intp)
        return ExplicitMetric(self.matrix[np.ix_(ids, ids)])

    def __repr__(self) -> str:
        return f"ExplicitMetric(n={self.n})"


def as_dataset(X, metric: str = "euclidean") -> Dataset:
    if isinstance(X, Dataset):
        return X
    if metric == "euclidean":
        return EuclideanPoints(X)
    if metric == "precomputed":
        return ExplicitMetric(X)
    raise ContractViolation(f"unknown metric {metric!r}; use 'euclidean' or 'precomputed'")


def dist(ds: Dataset, p: int, q: int) -> float:
    return ds.dist(p, q)


# ---------------------------------------------------------------------------
# parameters and results


def ceil_count(x: float) -> int:
    """Ceiling that ignores floating noise just above an integer."""
    return int(math.ceil(x - 1e-9 * max(1.0, abs(x))))


def floor_count(x: float) -> int:
    return int(math.floor(x + 1e-9 * max(1.0, abs(x))))


def exclusion_budget(z: int, eps: float) -> int:
    """Number of points ``floor((1 + eps) z)`` that may be left uncovered."""
    return floor_count((1.0 + eps) * z)


@dataclass(frozen=True)
class OutlierParams:
    """Knobs shared by the algorithms.

    ``mu`` and ``rho`` are only needed for coreset construction and the
    doubling-dimension variant; they may stay ``None`` otherwise.
    """

    k: int
    z: int = 0
    eps: float = 1.0
    eta: float = 0.1
    mu: Optional[float] = None
    rho: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ContractViolation(f"k must be a positive integer, got {self.k!r}")
        if not isinstance(self.z, (int, np.integer)) or self.z < 0:
            raise ContractViolation(f"z must be a non-negative integer, got {self.z!r}")
        if not (self.eps >= 0 and math.isfinite(self.eps)):
            raise ContractViolation(f"eps must be >= 0, got {self.eps!r}")
        if not 0 < self.eta < 1:
            raise ContractViolation(f"eta must lie in (0, 1), got {self.eta!r}")
        if self.mu is not None and not 0 < self.mu < 1:
            raise ContractViolation(f"mu must lie in (0, 1), got {self.mu!r}")
        if self.rho is not None and not self.rho >= 0:
            raise ContractViolation(f"rho must be >= 0, got {self.rho!r}")
        if not isinstance(self.seed, (int, np.integer)):
            raise ContractViolation(f"seed must be an integer, got {self.seed!r}")

    def gamma(self, n: float) -> float:
        """Outlier fraction ``z / n``."""
        return self.z / n

    def check_against(self, n: int) -> None:
        if self.k > n:
            raise ContractViolation(f"k={self.k} exceeds the number of points n={n}")
        if self.z >= n:
            raise ContractViolation(f"z={self.z} must be smaller than n={n}")

    def with_(self, **changes) -> "OutlierParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CenterSet:
    """Ordered, duplicate-free center ids (insertion order is kept)."""

    ids: tuple = ()

    def __post_init__(self):
        ids = tuple(int(i) for i in self.ids)
        if len(set(ids)) != len(ids):
            raise ContractViolation("center ids must be distinct")
        if any(i < 0 for i in ids):
            raise IndexError("center ids must be non-negative")
        object.__setattr__(self, "ids", ids)

    def __len__(self):
        return len(self.ids)

    def __iter__(self):
        return iter(self.ids)

    def __contains__(self, item):
        return item in self.ids

    def as_array(self) -> np.ndarray:
        return np.asarray(self.ids, dtype=np.intp)


CenterLike = Union[CenterSet, Sequence[int], np.ndarray]


def center_ids(E: CenterLike, n: int) -> np.ndarray:
    ids = E.as_array() if isinstance(E, CenterSet) else np.asarray(E, dtype=np.intp).ravel()
    if ids.size == 0:
        raise ContractViolation("center set must be non-empty")
    if ids.min() < 0 or ids.max() >= n:
        raise IndexError(f"center id out of range [0, {n})")
    return ids


class OutlierCost(NamedTuple):
    radius: float
    excluded: np.ndarray
    budget: float
    saturated: bool


@dataclass
class ClusteringResult:
    """Centers with their outlier-aware cost on a dataset.

    ``assignment[p]`` is the position in ``centers`` of the center nearest to
    ``p`` (ties to the smaller center id), or ``-1`` when ``p`` is excluded.
    """

    centers: CenterSet
    radius: float
    excluded: np.ndarray
    assignment: np.ndarray
    rounds: int = 0
    ratio: Optional[float] = None
    budget: float = 0
    saturated: bool = False
    trace: Optional[object] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "centers": list(self.centers.ids),
            "radius": self.radius,
            "excluded": [int(i) for i in self.excluded],
            "rounds": self.rounds,
            "ratio": self.ratio,
            "budget": self.budget,
            "saturated": self.saturated,
        }


# ---------------------------------------------------------------------------
# distance maintenance


class NearestTracker:
    """Nearest-center distances and owners, updated as centers are appended.

    An update only evaluates distances to the new centers, which is what keeps
    the greedy algorithms linear in ``n`` per added center.
    """

    def __init__(self, ds: Dataset):
        self.ds = ds
        self.dists = np.full(ds.n, np.inf)
        self.owner = np.full(ds.n, -1, dtype=np.intp)
        self.centers: list[int] = []
        self.is_center = np.zeros(ds.n, dtype=bool)

    def add(self, ids: Iterable[int]) -> list[int]:
        """Append the ids not already present; returns those actually added."""
        added = []
        for c in ids:
            c = int(c)
            if self.is_center[c]:
                continue
            d = self.ds.distances_to(c)
            better = (d < self.dists) | ((d == self.dists) & (c < self.owner))
            self.dists[better] = d[better]
            self.owner[better] = c
            self.centers.append(c)
            self.is_center[c] = True
            added.append(c)
        return added

    def __contains__(self, c) -> bool:
        return bool(self.is_center[int(c)])

    def __len__(self) -> int:
        return len(self.centers)


def nearest_distances(ds: Dataset, E: CenterLike, previous: Optional[np.ndarray] = None) -> np.ndarray:
    """Distance from every point to its nearest center.

    With ``previous`` given, ``E`` holds only the newly added centers and each
    entry becomes the minimum of its previous value and the new distances.
    """
    ids = center_ids(E, ds.n)
    if previous is not None:
        out = np.array(previous, dtype=np.float64, copy=True)
        if out.shape != (ds.n,):
            raise ContractViolation("previous distances must have length n")
    else:
        out = np.full(ds.n, np.inf)
    for c in ids:
        np.minimum(out, ds.distances_to(int(c)), out=out)
    return out


# ---------------------------------------------------------------------------
# cost


def check_weights(weights, n: int) -> Optional[np.ndarray]:
    if weights is None:
        return None
    w = np.asarray(weights, dtype=np.float64).ravel()
    if w.shape != (n,):
        raise ContractViolation(f"weights must have length {n}, got {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ContractViolation("weights must be finite and non-negative")
    if w.sum() <= 0:
        raise ContractViolation("total weight must be positive")
    return w


def outlier_cost(dists: np.ndarray, z: int, eps: float = 0.0, weights: Optional[np.ndarray] = None) -> OutlierCost:
    """Cost from precomputed nearest-center distances.

    Unit weights drop the farthest ``floor((1 + eps) z)`` points, ties going
    to the smaller id first.  With weights the budget is ``(1 + eps) z`` in
    weight units and the longest farthest-first prefix that fits is dropped;
    whole points only.
    """
    dists = np.asarray(dists, dtype=np.float64)
    n = dists.shape[0]
    if weights is None:
        budget = exclusion_budget(z, eps)
        if budget >= n:
            return OutlierCost(0.0, np.arange(n), budget, True)
        if budget == 0:
            return OutlierCost(float(dists.max()), np.empty(0, dtype=np.intp), 0, False)
        excluded = farthest_subset(dists, budget)
        radius = float(np.partition(dists, n - budget - 1)[n - budget - 1])
        return OutlierCost(radius, excluded, budget, False)

    budget = (1.0 + eps) * z
    if budget >= weights.sum() * (1 - 1e-12):
        return OutlierCost(0.0, np.arange(n), budget, True)
    excluded = weighted_prefix(dists, weights, budget)
    keep = np.ones(n, dtype=bool)
    keep[excluded] = False
    keep &= weights > 0
    radius = float(dists[keep].max()) if keep.any() else 0.0
    return OutlierCost(radius, excluded, budget, False)


def phi_eps(
    ds: Dataset,
    E: CenterLike,
    z: int,
    eps: float = 0.0,
    weights=None,
    subset: Optional[Sequence[int]] = None,
) -> OutlierCost:
    """Outlier-aware k-center cost of center set ``E`` on ``ds``.

    ``subset`` restricts the evaluated points (ids into ``ds``); ``weights``
    then align with ``subset``.  Excluded ids are reported in ``ds`` ids.
    """
    if z < 0 or eps < 0:
        raise ContractViolation("z and eps must be non-negative")
    dists = nearest_distances(ds, E)
    if subset is not None:
        subset = np.asarray(subset, dtype=np.intp)
        dists = dists[subset]
    n_eval = dists.shape[0]
    w = check_weights(weights, n_eval)
    if w is None and z >= n_eval:
        raise ContractViolation(f"z={z} must be smaller than the number of evaluated points {n_eval}")
    cost = outlier_cost(dists, z, eps, w)
    if subset is not None:
        cost = cost._replace(excluded=np.sort(subset[cost.excluded]))
    return cost


def evaluate(
    ds: Dataset,
    E: CenterLike,
    z: int,
    eps: float = 0.0,
    weights=None,
    r_opt: Optional[float] = None,
    rounds: int = 0,
    trace=None,
) -> ClusteringResult:
    """Full :class:`ClusteringResult` for a center set."""
    ids = center_ids(E, ds.n)
    tracker = NearestTracker(ds)
    tracker.add(ids)
    w = check_weights(weights, ds.n)
    cost = outlier_cost(tracker.dists, z, eps, w)
    order = np.argsort(ids, kind="stable")
    assignment = order[np.searchsorted(ids[order], tracker.owner)]
    assignment[cost.excluded] = -1
    ratio = None
    if r_opt is not None and r_opt > 0:
        ratio = cost.radius / r_opt
    elif r_opt == 0:
        ratio = 1.0 if cost.radius == 0 else math.inf
    return ClusteringResult(
        centers=CenterSet(tuple(ids)),
        radius=cost.radius,
        excluded=np.sort(cost.excluded),
        assignment=assignment,
        rounds=rounds,
        ratio=ratio,
        budget=cost.budget,
        saturated=cost.saturated,
        trace=trace,
    )


# ---------------------------------------------------------------------------
# metric audit


class MetricViolation(NamedTuple):
    kind: str
    points: tuple
    detail: str


def validate_metric(ds: Dataset, trials: int = 1000, seed: int = 0, rtol: float = 1e-12) -> list:
    """Audit an explicit metric.

    Symmetry and the zero diagonal are checked exhaustively; the triangle
    inequality on ``trials`` random triples of distinct points.  An empty list
    means no violation was found.
    """
    if not isinstance(ds, ExplicitMetric):
        raise UnsupportedVariant("validate_metric applies to ExplicitMetric datasets only")
    M = ds.matrix
    n = ds.n
    out = []
    for i in np.flatnonzero(np.diag(M) != 0):
        out.append(MetricViolation("diagonal", (int(i),), f"d({i},{i}) = {M[i, i]!r}"))
    rows, cols = np.nonzero(np.triu(M != M.T, k=1))
    for i, j in zip(rows, cols):
        out.append(MetricViolation("symmetry", (int(i), int(j)), f"d({i},{j}) = {M[i, j]!r} != d({j},{i}) = {M[j, i]!r}"))
    if n < 3 or trials <= 0:
        return out

    rng = np.random.default_rng(seed)
    triples = np.empty((0, 3), dtype=np.intp)
    while len(triples) < trials:
        draw = rng.integers(0, n, size=(trials, 3))
        distinct = (draw[:, 0] != draw[:, 1]) & (draw[:, 1] != draw[:, 2]) & (draw[:, 0] != draw[:, 2])
        triples = np.vstack([triples, draw[distinct]])
    triples = triples[:trials]
    seen = set()
    for a, b, c in triples:
        for x, y, m in ((a, c, b), (a, b, c), (b, c, a)):
            direct, detour = M[x, y], M[x, m] + M[m, y]
            if direct > detour * (1 + rtol) + rtol:
                key = (min(x, y), max(x, y), m)
                if key in seen:
                    continue
                seen.add(key)
                out.append(
                    MetricViolation(
                        "triangle",
                        (int(x), int(m), int(y)),
                        f"d({x},{y}) = {direct!r} > d({x},{m}) + d({m},{y}) = {detour!r}",
                    )
                )
    return out
