from fglab.checks.fixed_points import (
    FixedPointScan,
    RootScan,
    check_range_inclusion,
    check_weak_compatibility,
    find_coincidence_points,
    find_common_fixed_points,
)
from fglab.checks.registry import (
    INEQUALITY_REGISTRY,
    InequalityKind,
    InequalityTag,
    MapBundle,
    list_tags,
    register_inequality,
)
from fglab.checks.scanner import build_grid, check_family, check_inequality, evaluate_pairs

__all__ = [
    "INEQUALITY_REGISTRY",
    "FixedPointScan",
    "InequalityKind",
    "InequalityTag",
    "MapBundle",
    "RootScan",
    "build_grid",
    "check_family",
    "check_inequality",
    "check_range_inclusion",
    "check_weak_compatibility",
    "evaluate_pairs",
    "find_coincidence_points",
    "find_common_fixed_points",
    "list_tags",
    "register_inequality",
]
