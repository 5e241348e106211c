from fglab.iteration.diagnostics import DiagnosticReport, monotonicity_diagnostics
from fglab.iteration.models import IterationTrace, RunConfig, Scheme, StatusKind, TraceStatus
from fglab.iteration.schedules import ScheduleKind, StepSchedule, product_divergent
from fglab.iteration.schemes import (
    coincidence_iterate,
    ishikawa_iterate,
    ishikawa_iterate_pair,
    mann_iterate,
    mann_iterate_pair,
    picard_iterate,
)

__all__ = [
    "DiagnosticReport",
    "IterationTrace",
    "RunConfig",
    "ScheduleKind",
    "Scheme",
    "StatusKind",
    "StepSchedule",
    "TraceStatus",
    "coincidence_iterate",
    "ishikawa_iterate",
    "ishikawa_iterate_pair",
    "mann_iterate",
    "mann_iterate_pair",
    "monotonicity_diagnostics",
    "picard_iterate",
]
