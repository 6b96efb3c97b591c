"""Planted instances: Gaussian clusters in a hypercube plus far-away outliers.

Ground truth ``r_opt`` is the largest minimum-enclosing-ball radius over the
planted clusters, each ball computed with :func:`~kcenter_outliers.baselines.meb`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .baselines import meb
from .core import CenterLike, EuclideanPoints, center_ids
from .exceptions import ContractViolation, DegenerateGeometry

OUTLIER = -1
MAX_REJECTION_DRAWS = 10**6


@dataclass
class PlantedInstance:
    dataset: EuclideanPoints
    labels: np.ndarray
    planted_centers: np.ndarray
    meb_centers: np.ndarray
    meb_radii: np.ndarray
    r_opt: float
    params: dict = field(default_factory=dict)

    @property
    def outliers(self) -> np.ndarray:
        return np.flatnonzero(self.labels == OUTLIER)

    def truth_dict(self) -> dict:
        return {
            "labels": self.labels.tolist(),
            "planted_centers": self.planted_centers.tolist(),
            "meb_centers": self.meb_centers.tolist(),
            "meb_radii": self.meb_radii.tolist(),
            "r_opt": self.r_opt,
            "params": dict(self.params),
        }


def synth(
    n: int,
    D: int,
    k: int,
    z: int,
    side: float = 200.0,
    variance: float = 10.0,
    seed: int = 0,
    delta: float = 0.01,
) -> PlantedInstance:
    """Generate a planted instance.

    Cluster centers are uniform in ``[0, side]^D``; cluster sizes follow a
    uniform Dirichlet draw (each cluster gets at least one point) and sum to
    ``n - z``; points are the center plus isotropic Gaussian noise with
    per-coordinate ``variance``.  The ``z`` outliers are uniform in the cube of
    side ``4 * side`` sharing the data cube's center, redrawn until they fall
    outside every cluster ball.
    """
    if k < 1 or D < 1:
        raise ContractViolation("k and D must be positive")
    if not 0 <= z < n:
        raise ContractViolation(f"need 0 <= z < n, got z={z}, n={n}")
    if n - z < k:
        raise ContractViolation(f"n - z = {n - z} inliers cannot fill k={k} clusters")
    if side <= 0 or variance < 0:
        raise ContractViolation("side must be positive and variance non-negative")

    rng = np.random.default_rng(seed)
    centers = rng.uniform(0.0, side, size=(k, D))
    shares = rng.dirichlet(np.ones(k))
    sizes = 1 + rng.multinomial(n - z - k, shares)
    labels = np.repeat(np.arange(k), sizes)
    inliers = centers[labels] + rng.normal(0.0, math.sqrt(variance), size=(n - z, D))

    meb_centers = np.empty((k, D))
    meb_radii = np.empty(k)
    for j in range(k):
        meb_centers[j], meb_radii[j] = meb(inliers[labels == j], delta)

    outliers = np.empty((0, D))
    low, high = side / 2 - 2 * side, side / 2 + 2 * side
    draws = 0
    while outliers.shape[0] < z:
        if draws >= MAX_REJECTION_DRAWS:
            raise DegenerateGeometry(f"could not place {z} outliers outside the cluster balls in {draws} draws")
        batch = min(max(2 * (z - outliers.shape[0]), 64), max(64, 2_000_000 // (k * D)), MAX_REJECTION_DRAWS - draws)
        cand = rng.uniform(low, high, size=(batch, D))
        draws += batch
        gap = np.sqrt(((cand[:, None, :] - meb_centers[None, :, :]) ** 2).sum(axis=2)) - meb_radii
        outliers = np.vstack([outliers, cand[(gap > 0).all(axis=1)]])
    outliers = outliers[:z]

    coords = np.vstack([inliers, outliers])
    all_labels = np.concatenate([labels, np.full(z, OUTLIER)])
    return PlantedInstance(
        dataset=EuclideanPoints(coords),
        labels=all_labels,
        planted_centers=centers,
        meb_centers=meb_centers,
        meb_radii=meb_radii,
        r_opt=float(meb_radii.max()),
        params={"n": n, "D": D, "k": k, "z": z, "side": side, "variance": variance, "seed": seed},
    )


def lambda_counter(E: CenterLike, inst, labels: Optional[np.ndarray] = None) -> int:
    """Number of planted clusters containing at least one center of ``E``."""
    labels = inst.labels if labels is None else np.asarray(labels)
    ids = center_ids(E, labels.shape[0])
    hit = labels[ids]
    return int(np.unique(hit[hit != OUTLIER]).shape[0])
