from fglab.approx.battery import (
    ApproximationReport,
    Conclusion,
    HypothesisResult,
    verify_best_approximation_fixed_point,
    verify_invariant_approximation,
)
from fglab.approx.invariance import check_invariance, check_strict_gap
from fglab.approx.sets import BestApproxResult, CompactSet, best_approx

__all__ = [
    "ApproximationReport",
    "BestApproxResult",
    "CompactSet",
    "Conclusion",
    "HypothesisResult",
    "best_approx",
    "check_invariance",
    "check_strict_gap",
    "verify_best_approximation_fixed_point",
    "verify_invariant_approximation",
]
