from fglab.core.errors import (
    DomainError,
    EmptySetError,
    ExpressionError,
    FglabError,
    NoPreimage,
    ScheduleError,
)
from fglab.core.interval import Domain, GridSpec, Interval, sample_grid
from fglab.core.maps import (
    Affine,
    Branch,
    BranchKind,
    Constant,
    LinearFractional,
    PiecewiseMap,
    Power,
    eval_map,
    invert_map,
    is_continuous,
    map_image,
)
from fglab.core.psi import PsiFamily, PsiFunction, check_psi_class, eval_psi
from fglab.core.report import CheckReport, PairEvaluation, Witness

__all__ = [
    "Affine",
    "Branch",
    "BranchKind",
    "CheckReport",
    "Constant",
    "Domain",
    "DomainError",
    "EmptySetError",
    "ExpressionError",
    "FglabError",
    "GridSpec",
    "Interval",
    "LinearFractional",
    "NoPreimage",
    "PairEvaluation",
    "PiecewiseMap",
    "Power",
    "PsiFamily",
    "PsiFunction",
    "ScheduleError",
    "Witness",
    "check_psi_class",
    "eval_map",
    "eval_psi",
    "invert_map",
    "is_continuous",
    "map_image",
    "sample_grid",
]
