"""Uniform-sample instance reduction.

A uniform sample ``S`` of the right size keeps, for every union of ``k``
balls, the fraction of uncovered points within a relative ``eps`` error of
the fraction in the full set (for ranges holding at least a ``gamma``
fraction).  Solving on ``S`` with ``z' = ceil((1 + eps) gamma |S|)`` outliers
then transfers to the full set with outlier budget
``(1 + eps)**2 / (1 - eps) * gamma * n``.

The sample-size formula fixes the hidden constants and log factors as

    ceil(c / (eps**2 gamma) * (k D log2(2k) ln(2kD / (eps gamma)) + ln(1 / lambda)))

for Euclidean data, and ``ceil(c k ln(n) / (eps**2 gamma))`` for explicit metrics.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Optional

import numpy as np

from .core import Dataset, EuclideanPoints, OutlierParams, ceil_count, phi_eps
from .exceptions import ContractViolation


@dataclass(frozen=True)
class SamplePlan:
    sample_size: int
    z_prime: int
    eps: float
    gamma: float
    k: int
    D: Optional[int]
    lam: float
    c: float
    n: int
    vacuous: bool = False

    @property
    def full_budget(self) -> float:
        """Outlier budget under which sample solutions hold on the full set."""
        return (1.0 + self.eps) ** 2 / (1.0 - self.eps) * self.gamma * self.n

    @property
    def full_eps(self) -> float:
        """Exclusion slack matching :attr:`full_budget` for ``z = gamma n``."""
        return (1.0 + self.eps) ** 2 / (1.0 - self.eps) - 1.0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lam")
        out["full_budget"] = self.full_budget
        return out


def _check_eps_gamma(eps: float, gamma: float) -> None:
    if not 0 < eps <= 0.5:
        raise ContractViolation(f"eps must lie in (0, 0.5], got {eps}")
    if not 0 < gamma < 1:
        raise ContractViolation(f"gamma must lie in (0, 1), got {gamma}")


def sample_size(eps: float, gamma: float, k: int, D: int, lam: float = 0.1, c: float = 1.0) -> int:
    """Sample size for Euclidean data (no cap at ``n`` applied here)."""
    _check_eps_gamma(eps, gamma)
    if k < 1 or D < 1 or not 0 < lam < 1 or c <= 0:
        raise ContractViolation("k, D and c must be positive and lambda in (0, 1)")
    vc_term = k * D * math.log2(2 * k) * math.log(2 * k * D / (eps * gamma))
    return ceil_count(c / (eps**2 * gamma) * (vc_term + math.log(1.0 / lam)))


def metric_sample_size(eps: float, gamma: float, k: int, n: int, c: float = 1.0) -> int:
    _check_eps_gamma(eps, gamma)
    return ceil_count(c * k * math.log(n) / (eps**2 * gamma))


def plan_sample(n: int, params: OutlierParams, D: Optional[int], lam: float = 0.1, c: float = 1.0) -> SamplePlan:
    gamma = params.gamma(n)
    if D is None:
        size = metric_sample_size(params.eps, gamma, params.k, n, c)
    else:
        size = sample_size(params.eps, gamma, params.k, D, lam, c)
    vacuous = size >= n
    size = min(size, n)
    return SamplePlan(
        sample_size=size,
        z_prime=ceil_count((1.0 + params.eps) * gamma * size),
        eps=params.eps,
        gamma=gamma,
        k=params.k,
        D=D,
        lam=lam,
        c=c,
        n=n,
        vacuous=vacuous,
    )


def uniform_reduce(
    ds: Dataset, params: OutlierParams, lam: float = 0.1, c: float = 1.0
) -> tuple[Dataset, np.ndarray, SamplePlan]:
    """Uniform sample without replacement, sized by :func:`plan_sample`.

    Returns the sample as a dataset, its ids in ``ds`` (ascending) and the
    plan carrying ``z'``.  When the computed size reaches ``n`` the whole
    dataset comes back and ``plan.vacuous`` is set.
    """
    if params.z < 1:
        raise ContractViolation("sampling reduction needs z >= 1")
    D = ds.dim if isinstance(ds, EuclideanPoints) else None
    plan = plan_sample(ds.n, params, D, lam, c)
    if plan.vacuous:
        return ds, np.arange(ds.n), plan
    rng = np.random.default_rng(params.seed)
    ids = np.sort(rng.choice(ds.n, size=plan.sample_size, replace=False))
    return ds.subset(ids), ids, plan


def calibrate_constant(
    ds: Dataset,
    params: OutlierParams,
    r_opt: float,
    candidates: Iterable[float],
    seeds: Iterable[int] = range(10),
    lam: float = 0.1,
    factor: float = 2.0,
) -> dict:
    """Success rate per constant ``c`` of sample-then-solve on ``ds``.

    A seed succeeds when centers found by restarted greedy on the sample,
    evaluated on ``ds`` with the transferred budget, have radius at most
    ``factor * r_opt``.
    """
    from .greedy import with_restarts

    rates = {}
    seeds = list(seeds)
    for c in candidates:
        wins = 0
        for s in seeds:
            sample, ids, plan = uniform_reduce(ds, params.with_(seed=s), lam, c)
            sub_params = params.with_(z=min(plan.z_prime, sample.n - 1), seed=s)
            best, _ = with_restarts(sample, sub_params)
            E = ids[best.centers.as_array()]
            radius = phi_eps(ds, E, params.z, plan.full_eps).radius
            wins += radius <= factor * r_opt
        rates[c] = wins / len(seeds)
    return rates
