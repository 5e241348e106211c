"""Records produced by scenario discovery."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path


class ScenarioScope(str, Enum):
    BUILTIN = "builtin"
    USER = "user"


@dataclass(frozen=True)
class ScenarioRoot:
    path: Path
    scope: ScenarioScope


@dataclass(frozen=True)
class ScenarioMetadata:
    name: str
    description: str
    path: Path
    scope: ScenarioScope


@dataclass(frozen=True)
class ScenarioError:
    path: Path
    message: str


@dataclass
class ScenarioLoadOutcome:
    scenarios: list[ScenarioMetadata] = field(default_factory=list)
    errors: list[ScenarioError] = field(default_factory=list)

    def add(self, meta: ScenarioMetadata) -> bool:
        """Keep ``meta`` unless a scenario of that name is already known."""
        if self.find(meta.name) is not None:
            return False
        self.scenarios.append(meta)
        return True

    def find(self, name: str) -> ScenarioMetadata | None:
        for meta in self.scenarios:
            if meta.name == name:
                return meta
        return None

    def names(self) -> list[str]:
        return [meta.name for meta in self.scenarios]
