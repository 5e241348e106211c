"""Result records shared by the checkers, plus their plain-data form for reports."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional


def plain(value: Any) -> Any:
    """Convert numpy scalars, tuples and nested records into YAML-safe builtins."""
    if hasattr(value, "to_dict"):
        return value.to_dict()
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return float(value)
    if hasattr(value, "item") and callable(value.item):
        return plain(value.item())
    if isinstance(value, Mapping):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if hasattr(value, "tolist"):
        return plain(value.tolist())
    return str(value)


@dataclass(frozen=True)
class Witness:
    x: float
    y: float
    lhs: float
    rhs: float
    margin: float
    member: Optional[int] = None

    @classmethod
    def of(
        cls, x: float, y: float, lhs: float, rhs: float, member: Optional[int] = None
    ) -> Witness:
        return cls(float(x), float(y), float(lhs), float(rhs), float(lhs) - float(rhs), member)

    def to_dict(self) -> dict:
        out = {"x": self.x, "y": self.y, "lhs": self.lhs, "rhs": self.rhs, "margin": self.margin}
        if self.member is not None:
            out["member"] = self.member
        return out


@dataclass(frozen=True)
class PairEvaluation:
    """The inequality evaluated at one requested pair."""

    x: float
    y: float
    lhs: float
    rhs: float
    margin: float
    violated: bool

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "violated": self.violated,
        }


@dataclass(frozen=True)
class CheckReport:
    kind: str
    passed: bool
    witness: Optional[Witness] = None
    pairs_checked: int = 0
    max_margin: float = 0.0
    tol: float = 0.0
    grid: Optional[Mapping[str, Any]] = None
    probes: tuple[PairEvaluation, ...] = ()
    notes: tuple[str, ...] = ()
    details: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.passed == (self.witness is not None):
            raise ValueError("a check passes exactly when it carries no witness")
        object.__setattr__(self, "probes", tuple(self.probes))
        object.__setattr__(self, "notes", tuple(self.notes))

    def probe_at(self, x: float, y: float, tol: float = 1e-12) -> Optional[PairEvaluation]:
        for p in self.probes:
            if math.isclose(p.x, x, abs_tol=tol) and math.isclose(p.y, y, abs_tol=tol):
                return p
        return None

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "kind": self.kind,
            "passed": self.passed,
            "witness": self.witness.to_dict() if self.witness else None,
            "pairs_checked": self.pairs_checked,
            "max_margin": float(self.max_margin),
            "tol": float(self.tol),
        }
        if self.grid is not None:
            out["grid"] = plain(self.grid)
        if self.probes:
            out["probes"] = [p.to_dict() for p in self.probes]
        if self.notes:
            out["notes"] = list(self.notes)
        if self.details:
            out["details"] = plain(self.details)
        return out
