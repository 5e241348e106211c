from .config import (
    ApproxKind,
    ApproxSpec,
    CheckKind,
    CheckSpec,
    ExpectationSpec,
    IterationSpec,
    LabSettings,
    ScenarioConfig,
)
from .manager import ConfigError, ScenarioManager, list_builtins
from .models import ScenarioLoadOutcome, ScenarioMetadata, ScenarioRoot, ScenarioScope
from .scenario import Scenario, build_scenario

__all__ = [
    "ApproxKind",
    "ApproxSpec",
    "CheckKind",
    "CheckSpec",
    "ConfigError",
    "ExpectationSpec",
    "IterationSpec",
    "LabSettings",
    "Scenario",
    "ScenarioConfig",
    "ScenarioLoadOutcome",
    "ScenarioManager",
    "ScenarioMetadata",
    "ScenarioRoot",
    "ScenarioScope",
    "build_scenario",
    "list_builtins",
]
