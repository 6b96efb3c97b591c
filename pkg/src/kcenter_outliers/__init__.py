"""Greedy k-center clustering with outliers, coresets and sampling reduction."""

from .baselines import OracleResult, brute_force_opt, charikar, gonzalez, meb
from .core import (
    CenterSet,
    ClusteringResult,
    Dataset,
    EuclideanPoints,
    ExplicitMetric,
    OutlierCost,
    OutlierParams,
    as_dataset,
    dist,
    evaluate,
    nearest_distances,
    phi_eps,
    validate_metric,
)
from .coreset import Coreset, build_coreset, composable_build, coreset_phi0, random_partition
from .datagen import OUTLIER, PlantedInstance, lambda_counter, synth
from .estimators import KCenterOutliers, OutlierCoreset, UniformSampler
from .exceptions import ContractViolation, DegenerateGeometry, GuardRefusal, UnsupportedVariant
from .greedy import RoundTrace, bicriteria, doubling_bicriteria, two_approx, with_restarts
from .sampling import SamplePlan, plan_sample, sample_size, uniform_reduce
from .selection import farthest_subset

__version__ = "0.1.0"

__all__ = [
    "CenterSet",
    "ClusteringResult",
    "ContractViolation",
    "Coreset",
    "Dataset",
    "DegenerateGeometry",
    "EuclideanPoints",
    "ExplicitMetric",
    "GuardRefusal",
    "KCenterOutliers",
    "OUTLIER",
    "OracleResult",
    "OutlierCoreset",
    "OutlierCost",
    "OutlierParams",
    "PlantedInstance",
    "RoundTrace",
    "SamplePlan",
    "UniformSampler",
    "UnsupportedVariant",
    "as_dataset",
    "bicriteria",
    "brute_force_opt",
    "build_coreset",
    "charikar",
    "composable_build",
    "coreset_phi0",
    "dist",
    "doubling_bicriteria",
    "evaluate",
    "farthest_subset",
    "gonzalez",
    "lambda_counter",
    "meb",
    "nearest_distances",
    "phi_eps",
    "plan_sample",
    "random_partition",
    "sample_size",
    "synth",
    "two_approx",
    "uniform_reduce",
    "validate_metric",
    "with_restarts",
]
