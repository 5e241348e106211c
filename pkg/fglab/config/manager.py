from __future__ import annotations

import importlib.resources as pkgres
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import yaml
from loguru import logger
from pydantic import ValidationError

from fglab.core.errors import FglabError

from .config import LabSettings, ScenarioConfig
from .loader import discover_scenarios
from .models import ScenarioLoadOutcome, ScenarioRoot, ScenarioScope

BUILTIN_DIRNAME = "scenarios"


class ConfigError(FglabError):
    """Scenario or settings file could not be read or validated."""


def _format_validation(err: ValidationError) -> str:
    lines = []
    for e in err.errors():
        loc = ".".join(str(p) for p in e["loc"]) or "<root>"
        lines.append(f"  - {loc}: {e['msg']}")
    return "\n".join(lines)


def _read_mapping(path: Path, what: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as err:
        raise ConfigError(f"cannot read {what} {path}: {err}") from err
    except yaml.YAMLError as err:
        raise ConfigError(f"{what} {path} is not valid YAML: {err}") from err
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{what} must be a mapping (YAML dict): {path}")
    return data


class ScenarioManager:
    def __init__(
        self,
        settings: Optional[LabSettings] = None,
        scenario_dirs: Iterable[str | Path] = (),
    ) -> None:
        self.settings = settings or LabSettings()
        self.scenario_dirs: List[Path] = [Path(p) for p in scenario_dirs]
        self._outcome: Optional[ScenarioLoadOutcome] = None

    @staticmethod
    def load_settings(path: Optional[str | Path]) -> LabSettings:
        if path is None:
            return LabSettings()
        data = _read_mapping(Path(path), "settings file")
        try:
            return LabSettings.model_validate(data)
        except ValidationError as err:
            raise ConfigError(f"invalid settings file {path}:\n{_format_validation(err)}") from err

    def roots(self) -> List[ScenarioRoot]:
        roots: List[ScenarioRoot] = []
        builtin = self._locate_builtin_dir()
        if builtin is not None:
            roots.append(ScenarioRoot(path=builtin, scope=ScenarioScope.BUILTIN))
        roots.extend(ScenarioRoot(path=p, scope=ScenarioScope.USER) for p in self.scenario_dirs)
        return roots

    def discover(self) -> ScenarioLoadOutcome:
        if self._outcome is None:
            self._outcome = discover_scenarios(self.roots())
            for err in self._outcome.errors:
                logger.warning("skipping scenario file {}: {}", err.path, err.message)
        return self._outcome

    def list_builtins(self) -> List[str]:
        return [m.name for m in self.discover().scenarios if m.scope is ScenarioScope.BUILTIN]

    def resolve_path(self, ref: str | Path) -> Path:
        """A scenario file path, or the name of a discovered scenario."""
        p = Path(ref)
        if p.is_file():
            return p
        meta = self.discover().find(str(ref))
        if meta is not None:
            return meta.path
        known = ", ".join(self.discover().names()) or "<none>"
        raise ConfigError(f"no scenario file or scenario named '{ref}' (known: {known})")

    def load_config(self, ref: str | Path) -> ScenarioConfig:
        path = self.resolve_path(ref)
        data = _read_mapping(path, "scenario file")
        if "schema_version" not in data:
            raise ConfigError(f"scenario file {path} has no schema_version")
        try:
            return ScenarioConfig.model_validate(data)
        except ValidationError as err:
            raise ConfigError(f"invalid scenario file {path}:\n{_format_validation(err)}") from err

    def load(self, ref: str | Path):
        from fglab.config.scenario import build_scenario

        path = self.resolve_path(ref)
        return build_scenario(self.load_config(path), self.settings, source=path)

    @classmethod
    def _locate_builtin_dir(cls) -> Optional[Path]:
        """
        1) installed package resources
        2) source-tree fallback next to this module
        """
        try:
            res = pkgres.files("fglab.config").joinpath(BUILTIN_DIRNAME)
            if res.is_dir():
                return Path(str(res))
        except Exception:
            pass

        here = Path(__file__).resolve()
        p = here.parent / BUILTIN_DIRNAME
        if p.is_dir():
            return p

        return None


def list_builtins() -> List[str]:
    """Names of the scenarios shipped with the package, sorted."""
    return ScenarioManager().list_builtins()
