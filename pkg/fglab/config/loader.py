"""Scenario discovery: find YAML files under the roots and read their headers."""
from __future__ import annotations

from pathlib import Path
from typing import Any, Iterable, List

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .models import ScenarioError, ScenarioLoadOutcome, ScenarioMetadata, ScenarioRoot

SCENARIO_SUFFIXES = (".yaml", ".yml")
MAX_DESCRIPTION_LEN = 1024


class ScenarioHeader(BaseModel):
    """The keys discovery needs; the full schema is validated when a scenario is loaded."""

    model_config = ConfigDict(extra="ignore")

    name: str = Field(min_length=1)
    description: str = Field(default="", max_length=MAX_DESCRIPTION_LEN)

    @field_validator("name", "description", mode="before")
    @classmethod
    def _single_line(cls, v: Any) -> str:
        return "" if v is None else " ".join(str(v).split())


def scenario_files(root: Path) -> List[Path]:
    """Every scenario file below ``root`` in path order; hidden entries and symlinks skipped."""
    try:
        root = root.resolve()
        if not root.is_dir():
            return []
        candidates = sorted(root.rglob("*"))
    except OSError:
        return []
    return [
        p
        for p in candidates
        if p.suffix in SCENARIO_SUFFIXES
        and not any(part.startswith(".") for part in p.relative_to(root).parts)
        and not p.is_symlink()
        and p.is_file()
    ]


def read_header(path: Path, root: ScenarioRoot) -> ScenarioMetadata:
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except OSError as err:
        raise ValueError(f"failed to read file: {err}") from err
    except yaml.YAMLError as err:
        raise ValueError(f"invalid YAML: {err}") from err
    if not isinstance(data, dict):
        raise ValueError("scenario file must be a mapping")
    try:
        header = ScenarioHeader.model_validate(data)
    except ValidationError as err:
        first = err.errors()[0]
        raise ValueError(f"{first['loc'][0]}: {first['msg']}") from err
    return ScenarioMetadata(header.name, header.description, path, root.scope)


def discover_scenarios(roots: Iterable[ScenarioRoot]) -> ScenarioLoadOutcome:
    """Headers of every scenario under ``roots``; on a name clash the earlier root wins."""
    outcome = ScenarioLoadOutcome()
    for root in roots:
        for path in scenario_files(root.path):
            try:
                outcome.add(read_header(path, root))
            except ValueError as err:
                outcome.errors.append(ScenarioError(path=path, message=str(err)))
    outcome.scenarios.sort(key=lambda meta: (meta.name, str(meta.path)))
    return outcome
