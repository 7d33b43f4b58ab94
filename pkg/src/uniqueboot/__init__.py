"""Distribution of the number of unique items in a bootstrap sample."""

__version__ = "0.1.0"

from .exact import (
    UniqueCountDistribution,
    cdf_unique,
    distribution,
    excluded_distribution,
    falling_factorial,
    pmf_unique,
    stirling2,
)
from .moments import (
    central_moment,
    indicator_stats,
    mean_unique,
    raw_moment,
    variance_unique,
)
from .approx import approx_report, heuristic_category, heuristic_single
from .multivariate import CategoryProfile, joint_distribution, joint_pmf

__all__ = [
    "CategoryProfile",
    "UniqueCountDistribution",
    "approx_report",
    "cdf_unique",
    "central_moment",
    "distribution",
    "excluded_distribution",
    "falling_factorial",
    "heuristic_category",
    "heuristic_single",
    "indicator_stats",
    "joint_distribution",
    "joint_pmf",
    "mean_unique",
    "pmf_unique",
    "raw_moment",
    "stirling2",
    "variance_unique",
]
