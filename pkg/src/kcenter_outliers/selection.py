"""Farthest-subset selection.

``farthest_subset`` runs in expected linear time: one ``np.partition``
(introselect) finds the threshold value, and the deterministic tie rule
(smaller id first) is applied with two linear scans.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ContractViolation


def farthest_subset(dists, m: int) -> np.ndarray:
    """Ids of the ``m`` largest entries of ``dists``, ascending.

    Among equal distances the smaller id is taken first.

    >>> farthest_subset([5.0, 5.0, 3.0], 1)
    array([0])
    """
    dists = np.asarray(dists, dtype=np.float64)
    n = dists.shape[0]
    if not 1 <= m <= n:
        raise ContractViolation(f"m must satisfy 1 <= m <= n={n}, got {m}")
    if m == n:
        return np.arange(n)
    threshold = np.partition(dists, n - m)[n - m]
    mask = dists > threshold
    missing = m - int(np.count_nonzero(mask))
    if missing > 0:
        mask[np.flatnonzero(dists == threshold)[:missing]] = True
    return np.flatnonzero(mask)


def _farthest_order(dists: np.ndarray, weights: np.ndarray, need: float) -> np.ndarray:
    """Farthest-first order (ties by id) of a prefix holding more than ``need`` weight.

    Only that prefix is sorted.  Its length is guessed from ``need`` and
    doubled until the weight suffices, so with weights of at least one this
    is a single partition plus a sort of about ``need`` entries.
    """
    n = dists.shape[0]
    m = max(1, int(min(need, n)) + 1)
    while True:
        if m >= n:
            cand = np.arange(n)
            break
        threshold = np.partition(dists, n - m)[n - m]
        cand = np.flatnonzero(dists >= threshold)
        if weights[cand].sum() > need:
            break
        m *= 2
    return cand[np.lexsort((cand, -dists[cand]))]


def weighted_prefix(dists, weights, budget: float) -> np.ndarray:
    """Longest farthest-first prefix whose total weight stays within ``budget``."""
    dists = np.asarray(dists, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    limit = budget * (1 + 1e-12) + 1e-9
    order = _farthest_order(dists, weights, limit)
    cum = np.cumsum(weights[order])
    count = int(np.searchsorted(cum, limit, side="right"))
    return np.sort(order[:count])


def farthest_weighted(dists, weights, budget: float) -> tuple[np.ndarray, np.ndarray]:
    """Farthest ``budget`` units of weight, viewing weight ``w`` as ``w`` unit copies.

    Returns the ids involved (farthest first) and the number of copies of each
    that fall inside the budget; the last point may be cut.  A non-positive
    budget degenerates to the single farthest point.
    """
    dists = np.asarray(dists, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    order = _farthest_order(dists, weights, max(budget, 0.0))
    order = order[weights[order] > 0]
    if budget <= 0:
        return order[:1], np.ones(1)
    w = weights[order]
    cum = np.cumsum(w)
    count = int(np.searchsorted(cum, budget * (1 - 1e-12), side="left")) + 1
    count = min(count, order.shape[0])
    ids = order[:count]
    copies = w[:count].copy()
    before = cum[count - 2] if count > 1 else 0.0
    copies[-1] = min(copies[-1], max(budget - before, 0.0))
    if copies[-1] <= 0:
        copies[-1] = w[count - 1]
    return ids, copies
