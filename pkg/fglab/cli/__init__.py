from fglab.cli.console import LabConsole
from fglab.cli.recorder import ReportRecorder, trace_rows
from fglab.cli.runner import (
    ExpectationResult,
    ItemResult,
    ScenarioOutcome,
    check_expectation,
    run_items,
    run_scenario,
)

__all__ = [
    "ExpectationResult",
    "ItemResult",
    "LabConsole",
    "ReportRecorder",
    "ScenarioOutcome",
    "check_expectation",
    "run_items",
    "run_scenario",
    "trace_rows",
]
