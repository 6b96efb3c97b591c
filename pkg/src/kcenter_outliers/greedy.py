"""Greedy sampling algorithms for k-center clustering with outliers.

Each round looks at the points currently farthest from the chosen centers
(the ``floor((1 + eps) z)`` of them) and samples new centers uniformly from
that set instead of taking the single farthest point, which is likely an
outlier.  With ``z = 0`` the farthest set collapses to one point and the
procedure becomes Gonzalez's farthest-first traversal.

Randomness comes from numpy's PCG64 generator seeded with ``params.seed``;
restart trial ``i`` uses seed ``params.seed + i``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from ._parallel import parallel_map
from .core import (
    CenterSet,
    ClusteringResult,
    Dataset,
    NearestTracker,
    OutlierParams,
    ceil_count,
    check_weights,
    evaluate,
    exclusion_budget,
    outlier_cost,
)
from .exceptions import ContractViolation
from .selection import farthest_subset, farthest_weighted

__all__ = [
    "RoundRecord",
    "RoundTrace",
    "farthest_subset",
    "bicriteria",
    "bicriteria_rounds",
    "doubling_rounds",
    "doubling_bicriteria",
    "two_approx",
    "with_restarts",
    "default_trials",
    "initial_sample_size",
    "round_sample_size",
    "eps_for_centers",
]


@dataclass
class RoundRecord:
    round: int
    n_centers: int
    gap: Optional[float]
    cost: float
    cost0: float
    n_covered: Optional[int] = None


@dataclass
class RoundTrace:
    """Per-round diagnostics of one greedy run.

    ``gap`` is the distance from the farthest set to the centers at selection
    time (``None`` for the initial round), ``cost``/``cost0`` the relaxed and
    exact-budget radius after the round, and ``n_covered`` the number of
    planted clusters hit so far when labels were supplied.
    """

    records: list = field(default_factory=list)

    def costs(self) -> list:
        return [r.cost for r in self.records]

    def __len__(self):
        return len(self.records)

    def to_dict(self) -> dict:
        return {"records": [asdict(r) for r in self.records]}


def bicriteria_rounds(k: int, eta: float) -> int:
    return ceil_count((k + math.sqrt(k)) / (1.0 - eta))


def doubling_rounds(k: int, rho: float, eta: float) -> int:
    return ceil_count((2.0**rho * k + 2.0 ** (rho / 2.0) * math.sqrt(k)) / (1.0 - eta))


def initial_sample_size(gamma: float, eta: float) -> int:
    return ceil_count(math.log(1.0 / eta) / (1.0 - gamma))


def round_sample_size(eps: float, eta: float) -> int:
    return ceil_count((1.0 + eps) / eps * math.log(1.0 / eta))


def default_trials(k: int, eps: float, gamma: float, constant: float = 3.0) -> int:
    """Restart count ``ceil(c / (1 - gamma) * ((1 + eps) / eps) ** (k - 1))``."""
    per_round = 1.0 if eps == 0 else (1.0 + eps) / eps
    return max(1, ceil_count(constant / (1.0 - gamma) * per_round ** (k - 1)))


def eps_for_centers(target: int, k: int, eta: float, gamma: float, t: Optional[int] = None) -> float:
    """Largest ``eps`` making a bi-criteria run return about ``target`` centers.

    The run size is ``initial + (t - 1) * per_round``; this solves for the
    per-round count and inverts ``per_round = (1 + eps) / eps * ln(1 / eta)``.
    """
    t = bicriteria_rounds(k, eta) if t is None else t
    if t < 2:
        raise ContractViolation("need at least two rounds to size the run")
    log_term = math.log(1.0 / eta)
    per_round = max(math.ceil((target - initial_sample_size(gamma, eta)) / (t - 1)), math.floor(log_term) + 1)
    # nudge inwards so the ceiling lands exactly on per_round
    return log_term / (per_round - log_term) * (1 + 1e-9)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _draw(rng: np.random.Generator, pool: np.ndarray, count: int, w: Optional[np.ndarray] = None) -> np.ndarray:
    if w is None:
        count = min(count, pool.shape[0])
        return rng.choice(pool, size=count, replace=False)
    positive = w > 0
    pool, w = pool[positive], w[positive]
    count = min(count, pool.shape[0])
    return rng.choice(pool, size=count, replace=False, p=w / w.sum())


class _Run:
    """Shared state of one greedy run: tracker, trace and farthest-set logic."""

    def __init__(self, ds: Dataset, z: int, eps: float, weights, labels, record: bool = True):
        self.ds = ds
        self.record = record
        self.z = z
        self.eps = eps
        self.weights = weights
        self.labels = None if labels is None else np.asarray(labels)
        self.tracker = NearestTracker(ds)
        self.trace = RoundTrace()
        self._clusters_hit: set = set()

    def farthest(self) -> tuple[np.ndarray, Optional[np.ndarray]]:
        d = self.tracker.dists
        if self.weights is None:
            m = min(max(exclusion_budget(self.z, self.eps), 1), self.ds.n)
            return farthest_subset(d, m), None
        return farthest_weighted(d, self.weights, (1.0 + self.eps) * self.z)

    def add(self, ids, round_index: int, gap: Optional[float]) -> None:
        added = self.tracker.add(ids)
        if not self.record:
            return
        covered = None
        if self.labels is not None:
            self._clusters_hit.update(int(self.labels[c]) for c in added if self.labels[c] >= 0)
            covered = len(self._clusters_hit)
        d = self.tracker.dists
        self.trace.records.append(
            RoundRecord(
                round=round_index,
                n_centers=len(self.tracker),
                gap=gap,
                cost=outlier_cost(d, self.z, self.eps, self.weights).radius,
                cost0=outlier_cost(d, self.z, 0.0, self.weights).radius,
                n_covered=covered,
            )
        )

    def centers(self) -> CenterSet:
        return CenterSet(tuple(self.tracker.centers))


def _prepare(ds: Dataset, params: OutlierParams, weights):
    params.check_against(ds.n)
    w = check_weights(weights, ds.n)
    total = ds.n if w is None else float(w.sum())
    if w is not None and params.z >= total:
        raise ContractViolation(f"z={params.z} must be smaller than the total weight {total}")
    return w, params.gamma(total)


def bicriteria(
    ds: Dataset,
    params: OutlierParams,
    t: Optional[int] = None,
    weights=None,
    labels=None,
) -> tuple[CenterSet, RoundTrace]:
    """Bi-criteria greedy: an initial uniform sample, then ``t - 1`` sampled rounds.

    Round 1 draws ``ceil(ln(1/eta) / (1 - gamma))`` points uniformly without
    replacement.  Every later round draws ``ceil((1 + eps) / eps * ln(1/eta))``
    points uniformly without replacement from the ``floor((1 + eps) z)``
    points farthest from the current centers; points already chosen are kept
    once.  ``t`` defaults to ``ceil((k + sqrt(k)) / (1 - eta))``.

    With ``weights`` every point counts as that many unit copies: sampling is
    weight-proportional and the farthest set is measured in weight.
    """
    run = _bicriteria_run(ds, params, t, weights, labels)
    return run.centers(), run.trace


def _bicriteria_run(ds, params, t=None, weights=None, labels=None) -> _Run:
    w, gamma = _prepare(ds, params, weights)
    t = bicriteria_rounds(params.k, params.eta) if t is None else int(t)
    if t < 1:
        raise ContractViolation(f"t must be >= 1, got {t}")
    if params.eps == 0:
        raise ContractViolation("eps must be > 0: the per-round sample size is undefined")

    rng = _rng(params.seed)
    run = _Run(ds, params.z, params.eps, w, labels)
    run.add(_draw(rng, np.arange(ds.n), initial_sample_size(gamma, params.eta), w), 1, None)
    per_round = 1 if params.z == 0 else round_sample_size(params.eps, params.eta)
    for j in range(2, t + 1):
        pool, copies = run.farthest()
        gap = float(run.tracker.dists[pool].min())
        run.add(_draw(rng, pool, per_round, copies), j, gap)
    return run


def doubling_bicriteria(
    ds: Dataset, params: OutlierParams, weights=None, labels=None
) -> tuple[CenterSet, RoundTrace]:
    """Bi-criteria run sized for inliers of doubling dimension at most ``rho``.

    Uses ``t = ceil((2**rho k + 2**(rho/2) sqrt(k)) / (1 - eta))`` rounds.
    """
    if params.rho is None:
        raise ContractViolation("doubling_bicriteria needs params.rho")
    t = doubling_rounds(params.k, params.rho, params.eta)
    return bicriteria(ds, params, t=t, weights=weights, labels=labels)


def two_approx(ds: Dataset, params: OutlierParams, weights=None, labels=None) -> tuple[CenterSet, RoundTrace]:
    """Exactly ``k`` centers: one uniform start, then one draw per round from the farthest set.

    Points already chosen are left out of the draw so the result always has
    ``k`` distinct centers (they sit at distance 0 and only reach the
    farthest set once the cost has dropped to 0).
    """
    run = _two_approx_run(ds, params, weights, labels)
    return run.centers(), run.trace


def _two_approx_run(ds, params, weights=None, labels=None, record=True) -> _Run:
    w, _ = _prepare(ds, params, weights)
    if params.z > 0 and params.k > 1 and params.eps == 0:
        raise ContractViolation("eps must be > 0 when z > 0")

    rng = _rng(params.seed)
    run = _Run(ds, params.z, params.eps, w, labels, record)
    run.add(_draw(rng, np.arange(ds.n), 1, w), 1, None)
    for j in range(2, params.k + 1):
        pool, copies = run.farthest()
        gap = float(run.tracker.dists[pool].min())
        fresh = ~run.tracker.is_center[pool]
        if copies is not None:
            fresh &= copies > 0
        if not fresh.any():
            # every farthest point is already a center: fall back to the farthest non-center
            d = np.where(run.tracker.is_center, -np.inf, run.tracker.dists)
            if w is not None:
                d[w <= 0] = -np.inf
            run.add([int(np.argmax(d))], j, gap)
            continue
        run.add(_draw(rng, pool[fresh], 1, None if copies is None else copies[fresh]), j, gap)
    return run


def with_restarts(
    ds: Dataset,
    params: OutlierParams,
    trials: Optional[int] = None,
    weights=None,
    eval_eps: Optional[float] = None,
    r_opt: Optional[float] = None,
    constant: float = 3.0,
    keep_traces: bool = True,
) -> tuple[ClusteringResult, Optional[list]]:
    """Best of several :func:`two_approx` runs.

    Trial ``i`` uses seed ``params.seed + i``.  Runs are compared by their
    cost with exclusion slack ``eval_eps`` (``params.eps`` by default); ties go
    to the lowest trial index, so the choice does not depend on how trials
    are scheduled.  Returns the best result and every trial's trace.

    With ``keep_traces=False`` trials run without per-round bookkeeping and
    ``None`` is returned in place of the trace list; the winning trial is
    replayed so ``result.trace`` is still filled in.
    """
    w, gamma = _prepare(ds, params, weights)
    if trials is None:
        trials = default_trials(params.k, params.eps, gamma, constant)
    if trials < 1:
        raise ContractViolation(f"trials must be >= 1, got {trials}")
    eval_eps = params.eps if eval_eps is None else eval_eps

    def one(i: int):
        run = _two_approx_run(ds, params.with_(seed=params.seed + i), w, record=keep_traces)
        radius = outlier_cost(run.tracker.dists, params.z, eval_eps, w).radius
        return radius, run.centers(), run.trace if keep_traces else None

    runs = parallel_map(one, range(trials))
    best = min(range(trials), key=lambda i: (runs[i][0], i))
    _, E, trace = runs[best]
    if trace is None:
        E, trace = two_approx(ds, params.with_(seed=params.seed + best), weights=w)
    result = evaluate(ds, E, params.z, eval_eps, weights=w, r_opt=r_opt, rounds=len(trace), trace=trace)
    return result, [r[2] for r in runs] if keep_traces else None
