"""scikit-learn style front ends.

``KCenterOutliers`` follows the clusterer API (``fit``/``predict``/
``fit_predict``, ``labels_`` with ``-1`` for outliers).  The two reducers
expose ``fit_resample`` returning the reduced points together with their
weights or adjusted outlier count, ready to feed back into a clusterer.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import check_input, check_sample_weight, resolve_seed
from .baselines import brute_force_opt, charikar, gonzalez
from .core import EuclideanPoints, OutlierParams, evaluate
from .coreset import build_coreset, composable_build, random_partition
from .exceptions import ContractViolation
from .greedy import bicriteria, doubling_bicriteria, two_approx, with_restarts
from .sampling import uniform_reduce

ALGORITHMS = ("two_approx", "restarts", "bicriteria", "doubling", "gonzalez", "charikar", "bruteforce")


class KCenterOutliers(ClusterMixin, BaseEstimator):
    """k-center clustering that tolerates ``n_outliers`` outliers.

    Parameters
    ----------
    n_clusters : int
        Number of centers ``k``.  Bi-criteria algorithms return more.
    n_outliers : int
        Outlier count ``z``.
    algorithm : str
        One of ``two_approx``, ``restarts``, ``bicriteria``, ``doubling``,
        ``gonzalez``, ``charikar``, ``bruteforce``.
    eps, eta, rho : float
        Greedy slack, failure probability, doubling-dimension estimate.
    n_rounds : int, optional
        Round count for ``bicriteria`` (default from ``k`` and ``eta``).
    n_trials : int, optional
        Restart count for ``restarts`` (default from ``k``, ``eps``, ``z/n``).
    eval_eps : float
        Exclusion slack used for the reported radius and outlier labels.
    metric : {"euclidean", "precomputed"}
    random_state : int or None
    """

    def __init__(
        self,
        n_clusters=2,
        n_outliers=0,
        algorithm="two_approx",
        eps=1.0,
        eta=0.1,
        rho=None,
        n_rounds=None,
        n_trials=None,
        eval_eps=0.0,
        metric="euclidean",
        random_state=0,
    ):
        self.n_clusters = n_clusters
        self.n_outliers = n_outliers
        self.algorithm = algorithm
        self.eps = eps
        self.eta = eta
        self.rho = rho
        self.n_rounds = n_rounds
        self.n_trials = n_trials
        self.eval_eps = eval_eps
        self.metric = metric
        self.random_state = random_state

    def fit(self, X, y=None, sample_weight=None):
        if self.algorithm not in ALGORITHMS:
            raise ContractViolation(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        ds = check_input(X, self.metric)
        w = check_sample_weight(sample_weight, ds.n)
        seed = resolve_seed(self.random_state)
        params = OutlierParams(
            k=int(self.n_clusters), z=int(self.n_outliers), eps=self.eps, eta=self.eta, rho=self.rho, seed=seed
        )
        params.check_against(ds.n)

        trace = None
        algo = self.algorithm
        if algo == "bicriteria":
            E, trace = bicriteria(ds, params, t=self.n_rounds, weights=w)
        elif algo == "doubling":
            E, trace = doubling_bicriteria(ds, params, weights=w)
        elif algo == "two_approx":
            E, trace = two_approx(ds, params, weights=w)
        elif algo == "restarts":
            best, _ = with_restarts(ds, params, trials=self.n_trials, weights=w, eval_eps=self.eval_eps)
            E, trace = best.centers, best.trace
        elif algo == "gonzalez":
            first = int(np.random.default_rng(seed).integers(ds.n))
            E = gonzalez(ds, params.k, first=first)
        elif algo == "charikar":
            E = charikar(ds, params.k, params.z, sample_weight=w)
        else:
            if w is not None:
                raise ContractViolation("bruteforce does not take sample weights")
            E = brute_force_opt(ds, params.k, params.z).opt_centers

        result = evaluate(ds, E, params.z, self.eval_eps, weights=w, rounds=len(trace or ()), trace=trace)
        self.result_ = result
        self.center_indices_ = result.centers.as_array()
        if isinstance(ds, EuclideanPoints):
            self.cluster_centers_ = ds.coords[self.center_indices_]
        self.labels_ = result.assignment
        self.outlier_indices_ = result.excluded
        self.radius_ = result.radius
        self.trace_ = trace
        self.n_features_in_ = ds.dim if isinstance(ds, EuclideanPoints) else ds.n
        return self

    def transform(self, X):
        """Distances from each row of ``X`` to every center."""
        check_is_fitted(self, "center_indices_")
        if self.metric == "precomputed":
            D = check_array(X, dtype=np.float64)
            return D[:, self.center_indices_]
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ContractViolation(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        diff = X[:, None, :] - self.cluster_centers_[None, :, :]
        return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))

    def predict(self, X):
        """Index of the nearest center, or ``-1`` beyond the fitted radius.

        With ``metric="precomputed"`` pass distances to the training points.
        """
        D = self.transform(X)
        labels = np.argmin(D, axis=1)
        labels[D[np.arange(D.shape[0]), labels] > self.radius_] = -1
        return labels


class OutlierCoreset(BaseEstimator):
    """Weighted coreset for k-center with outliers.

    ``fit_resample`` returns the coreset rows and their integer weights; pass
    them as ``sample_weight`` to :class:`KCenterOutliers`.
    """

    def __init__(
        self,
        n_clusters=2,
        n_outliers=0,
        mu=0.2,
        rho=2.0,
        eta=0.1,
        eps=1.0,
        l=None,
        n_parts=1,
        metric="euclidean",
        random_state=0,
    ):
        self.n_clusters = n_clusters
        self.n_outliers = n_outliers
        self.mu = mu
        self.rho = rho
        self.eta = eta
        self.eps = eps
        self.l = l
        self.n_parts = n_parts
        self.metric = metric
        self.random_state = random_state

    def fit(self, X, y=None):
        ds = check_input(X, self.metric)
        seed = resolve_seed(self.random_state)
        params = OutlierParams(
            k=int(self.n_clusters), z=int(self.n_outliers), eta=self.eta, mu=self.mu, rho=self.rho, seed=seed
        )
        if self.n_parts == 1:
            cs = build_coreset(ds, params, l=self.l, eps=self.eps)
        else:
            parts = random_partition(ds.n, int(self.n_parts), seed)
            cs = composable_build(ds, parts, params, l=self.l, eps=self.eps)
        self.coreset_ = cs
        self.indices_ = cs.points
        self.sample_weight_ = cs.weights
        self.r_tilde_ = cs.r_tilde
        self.rep_map_ = cs.rep_map
        return self

    def fit_resample(self, X, y=None):
        self.fit(X)
        if self.metric == "precomputed":
            M = check_array(X, dtype=np.float64)
            return M[np.ix_(self.indices_, self.indices_)], self.sample_weight_
        X = check_array(X, dtype=np.float64)
        return X[self.indices_], self.sample_weight_


class UniformSampler(BaseEstimator):
    """Uniform sample with the adjusted outlier count ``n_outliers_``."""

    def __init__(self, n_clusters=2, n_outliers=1, eps=0.5, lam=0.1, c=1.0, random_state=0):
        self.n_clusters = n_clusters
        self.n_outliers = n_outliers
        self.eps = eps
        self.lam = lam
        self.c = c
        self.random_state = random_state

    def fit(self, X, y=None):
        ds = check_input(X, "euclidean")
        params = OutlierParams(
            k=int(self.n_clusters), z=int(self.n_outliers), eps=self.eps, seed=resolve_seed(self.random_state)
        )
        _, ids, plan = uniform_reduce(ds, params, self.lam, self.c)
        self.indices_ = ids
        self.plan_ = plan
        self.n_outliers_ = plan.z_prime
        return self

    def fit_resample(self, X, y=None):
        self.fit(X)
        return check_array(X, dtype=np.float64)[self.indices_]
