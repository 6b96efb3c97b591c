"""Input validation shared by the estimators."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .core import Dataset, EuclideanPoints, ExplicitMetric
from .exceptions import ContractViolation


def check_input(X, metric: str = "euclidean") -> Dataset:
    """Wrap ``X`` as a dataset after the usual array checks."""
    if isinstance(X, Dataset):
        return X
    X = check_array(X, dtype=np.float64, ensure_all_finite=True)
    if metric == "euclidean":
        return EuclideanPoints(X)
    if metric == "precomputed":
        if X.shape[0] != X.shape[1]:
            raise ContractViolation(f"precomputed metric must be square, got {X.shape}")
        return ExplicitMetric(X)
    raise ContractViolation(f"metric must be 'euclidean' or 'precomputed', got {metric!r}")


def resolve_seed(random_state) -> int:
    if random_state is None:
        return int(np.random.SeedSequence().entropy % (2**63))
    if isinstance(random_state, (int, np.integer)) and random_state >= 0:
        return int(random_state)
    raise ContractViolation(f"random_state must be a non-negative int or None, got {random_state!r}")


def check_sample_weight(sample_weight, n: int):
    if sample_weight is None:
        return None
    w = np.asarray(sample_weight, dtype=np.float64).ravel()
    if w.shape != (n,):
        raise ContractViolation(f"sample_weight must have length {n}, got {w.shape}")
    return w
