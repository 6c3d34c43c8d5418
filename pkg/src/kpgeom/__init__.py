"""Numerical toolkit for Kneser–Poulsen type inequalities under uniform and
strong contractions: exact planar measures, ball intersections, bounds and
verification campaigns."""

__version__ = "0.1.0"

from .balls import BallIntersection, SpindleHull
from .bodies import PlacedBodies, UnconditionalBody
from .bounds import f_lower, g_upper, intersection_thresholds, union_thresholds
from .experiments import (
    VerificationRecord,
    anneal_search,
    campaign,
    figure_fixtures,
    strong_contraction_campaign,
    verify_intersection_pair,
    verify_union_pair,
)
from .geometry import (
    Configuration,
    circumball,
    is_contraction,
    is_strong_contraction,
    one_sided_reflection,
    sample_uniform_contraction_pair,
    uniform_contraction_interval,
)

__all__ = [
    "BallIntersection", "Configuration", "PlacedBodies", "SpindleHull", "UnconditionalBody",
    "VerificationRecord", "anneal_search", "campaign", "circumball", "f_lower", "figure_fixtures",
    "g_upper", "intersection_thresholds", "is_contraction", "is_strong_contraction",
    "one_sided_reflection", "sample_uniform_contraction_pair", "strong_contraction_campaign",
    "uniform_contraction_interval", "union_thresholds", "verify_intersection_pair", "verify_union_pair",
]
