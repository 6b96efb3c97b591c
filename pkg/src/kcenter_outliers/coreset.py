"""Weighted coresets for k-center with outliers in doubling metrics.

A bi-criteria greedy run with ``l = ceil((2 / mu)**rho * k)`` in place of
``k`` leaves every point except the ``2z`` farthest within a small radius
``r_tilde`` of the chosen centers.  Those points collapse onto their nearest
center, which carries their count as weight; the ``2z`` far points are kept
as they are.  Every point moves by at most ``r_tilde``, so the exact-budget
cost of any center set changes by at most ``r_tilde`` on the coreset.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._parallel import parallel_map
from .core import CenterLike, Dataset, OutlierParams, ceil_count, exclusion_budget, phi_eps
from .exceptions import ContractViolation
from .greedy import _bicriteria_run, initial_sample_size, round_sample_size


@dataclass
class Coreset:
    """Weighted subset of a dataset.

    ``points`` are ids into the source dataset and ``weights`` their positive
    integer weights.  ``rep_map[p]`` is the coreset point standing in for
    source point ``p``; it lies within ``r_tilde`` of ``p``.
    """

    points: np.ndarray
    weights: np.ndarray
    r_tilde: float
    rep_map: np.ndarray
    n: int
    l: int = 0
    t: int = 0
    n_centers: int = 0
    full: bool = False
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def total_weight(self) -> int:
        return int(self.weights.sum())

    def metadata(self) -> dict:
        return {
            "n": self.n,
            "size": len(self),
            "r_tilde": self.r_tilde,
            "l": self.l,
            "t": self.t,
            "n_centers": self.n_centers,
            "full": self.full,
            **self.meta,
        }


def coreset_l(k: int, mu: float, rho: float) -> int:
    return ceil_count((2.0 / mu) ** rho * k)


def coreset_rounds(l: int, eta: float) -> int:
    return ceil_count((l + math.sqrt(l)) / (1.0 - eta))


def coreset_size_bound(params: OutlierParams, l: Optional[int] = None, eps: float = 1.0, n: Optional[int] = None) -> int:
    """Upper bound on the coreset size: far points plus every greedy center."""
    l = _resolve_l(params, l)
    gamma = 0.0 if n is None else params.gamma(n)
    t = coreset_rounds(l, params.eta)
    per_round = 1 if params.z == 0 else round_sample_size(eps, params.eta)
    return exclusion_budget(params.z, eps) + initial_sample_size(gamma, params.eta) + (t - 1) * per_round


def _resolve_l(params: OutlierParams, l: Optional[int]) -> int:
    if l is not None:
        if l < 1:
            raise ContractViolation(f"l must be >= 1, got {l}")
        return int(l)
    if params.mu is None or params.rho is None:
        raise ContractViolation("coreset construction needs params.mu and params.rho, or an explicit l")
    return coreset_l(params.k, params.mu, params.rho)


def _whole(n: int, l: int, meta: dict) -> Coreset:
    ids = np.arange(n)
    return Coreset(ids, np.ones(n, dtype=np.int64), 0.0, ids.copy(), n, l=l, full=True, meta=meta)


def build_coreset(ds: Dataset, params: OutlierParams, l: Optional[int] = None, eps: float = 1.0) -> Coreset:
    """Build a coreset of ``ds``.

    ``l`` overrides ``ceil((2 / mu)**rho * k)``; ``eps`` is the slack of the
    inner greedy run (1 by default), which keeps ``floor((1 + eps) z)`` far
    points.  When ``l`` exceeds ``n`` the whole dataset is returned with unit
    weights and ``full`` set.
    """
    n = ds.n
    if eps <= 0:
        raise ContractViolation(f"eps must be > 0, got {eps}")
    if params.z >= n:
        raise ContractViolation(f"z={params.z} must be smaller than n={n}")
    l = _resolve_l(params, l)
    meta = {"mu": params.mu, "rho": params.rho, "eta": params.eta, "eps": eps, "seed": params.seed, "z": params.z}
    if l > n:
        return _whole(n, l, meta)

    t = coreset_rounds(l, params.eta)
    run = _bicriteria_run(ds, params.with_(k=l, eps=eps), t=t)
    d, owner = run.tracker.dists, run.tracker.owner

    budget = exclusion_budget(params.z, eps)
    r_tilde = 0.0 if budget >= n else float(np.partition(d, n - budget - 1)[n - budget - 1])
    inside = d <= r_tilde
    counts = np.bincount(owner[inside], minlength=n)
    centers = np.asarray(run.tracker.centers, dtype=np.intp)
    centers = centers[counts[centers] > 0]
    far = np.flatnonzero(~inside)
    return Coreset(
        points=np.concatenate([centers, far]),
        weights=np.concatenate([counts[centers], np.ones(far.shape[0], dtype=np.int64)]).astype(np.int64),
        r_tilde=r_tilde,
        rep_map=np.where(inside, owner, np.arange(n)),
        n=n,
        l=l,
        t=t,
        n_centers=len(run.tracker),
        meta=meta,
    )


def coreset_phi0(ds: Dataset, cs: Coreset, H: CenterLike, z: int) -> float:
    """Exact-budget weighted cost of ``H`` evaluated on the coreset points only."""
    return phi_eps(ds, H, z, 0.0, weights=cs.weights, subset=cs.points).radius


def random_partition(n: int, parts: int, seed: int = 0) -> list:
    """Split ``range(n)`` into ``parts`` random groups of near-equal size, each sorted."""
    if parts < 1:
        raise ContractViolation(f"parts must be >= 1, got {parts}")
    if parts == 1:
        return [np.arange(n)]
    perm = np.random.default_rng(seed).permutation(n)
    return [np.sort(chunk) for chunk in np.array_split(perm, parts)]


def composable_build(
    ds: Dataset,
    parts: Sequence[Sequence[int]],
    params: OutlierParams,
    l: Optional[int] = None,
    eps: float = 1.0,
) -> Coreset:
    """Coreset of the union of independently built per-part coresets.

    Part ``i`` is built with seed ``params.seed + i`` and the full outlier
    budget ``z``; ids are mapped back to ``ds``.  A part too small to hold
    ``z`` outliers is carried whole.
    """
    n = ds.n
    parts = [np.asarray(p, dtype=np.intp).ravel() for p in parts]
    seen = np.zeros(n, dtype=np.int64)
    for p in parts:
        np.add.at(seen, p, 1)
    if np.any(seen != 1):
        raise ContractViolation("parts must be disjoint and cover every point exactly once")
    l_value = _resolve_l(params, l)

    jobs = []
    for i, ids in enumerate(parts):
        if ids.size == 0:
            warnings.warn(f"skipping empty partition {i}", stacklevel=2)
            continue
        jobs.append((i, ids))

    def one(job):
        i, ids = job
        sub = ds.subset(ids)
        if params.z >= ids.size:
            return ids, _whole(ids.size, l_value, {})
        return ids, build_coreset(sub, params.with_(seed=params.seed + i), l=l_value, eps=eps)

    built = parallel_map(one, jobs)
    rep_map = np.empty(n, dtype=np.intp)
    for ids, cs in built:
        rep_map[ids] = ids[cs.rep_map]
    return Coreset(
        points=np.concatenate([ids[cs.points] for ids, cs in built]),
        weights=np.concatenate([cs.weights for _, cs in built]),
        r_tilde=max(cs.r_tilde for _, cs in built),
        rep_map=rep_map,
        n=n,
        l=l_value,
        t=max(cs.t for _, cs in built),
        n_centers=sum(cs.n_centers for _, cs in built),
        full=all(cs.full for _, cs in built),
        meta={"mu": params.mu, "rho": params.rho, "eta": params.eta, "eps": eps, "seed": params.seed,
              "z": params.z, "parts": len(built)},
    )
