from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from fglab.core.errors import ScheduleError


class ScheduleKind(str, Enum):
    CONSTANT = "constant"
    HARMONIC = "harmonic"
    TABLE = "table"


@dataclass(frozen=True)
class StepSchedule:
    """Step sizes alpha_n in [0, 1].

    ``divergent_sum`` is analytic metadata: known for constant and harmonic kinds,
    asserted by the caller for tables. It is never inferred from the values.
    """

    kind: ScheduleKind
    alpha: float = 0.0
    c: float = 1.0
    values: tuple[float, ...] = field(default_factory=tuple)
    asserted_divergent: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.kind is ScheduleKind.CONSTANT:
            self._check(self.alpha)
        elif self.kind is ScheduleKind.HARMONIC:
            if self.c <= 0:
                raise ScheduleError(f"harmonic schedule needs c > 0, got {self.c!r}")
        else:
            if not self.values:
                raise ScheduleError("table schedule needs at least one value")
            for v in self.values:
                self._check(v)

    @staticmethod
    def _check(value: float) -> float:
        if not 0.0 <= value <= 1.0:
            raise ScheduleError(f"step size {value!r} is outside [0, 1]")
        return value

    @classmethod
    def constant(cls, alpha: float) -> StepSchedule:
        return cls(ScheduleKind.CONSTANT, alpha=alpha)

    @classmethod
    def harmonic(cls, c: float = 1.0) -> StepSchedule:
        return cls(ScheduleKind.HARMONIC, c=c)

    @classmethod
    def table(cls, values, divergent_sum: bool = False) -> StepSchedule:
        return cls(ScheduleKind.TABLE, values=tuple(values), asserted_divergent=divergent_sum)

    @property
    def divergent_sum(self) -> bool:
        if self.kind is ScheduleKind.CONSTANT:
            return self.alpha > 0
        if self.kind is ScheduleKind.HARMONIC:
            return True
        return self.asserted_divergent

    @property
    def is_zero(self) -> bool:
        if self.kind is ScheduleKind.CONSTANT:
            return self.alpha == 0
        if self.kind is ScheduleKind.TABLE:
            return all(v == 0 for v in self.values)
        return False

    def at(self, n: int) -> float:
        if n < 0:
            raise ScheduleError(f"step index must be non-negative, got {n}")
        if self.kind is ScheduleKind.CONSTANT:
            return self.alpha
        if self.kind is ScheduleKind.HARMONIC:
            return self._check(min(1.0, self.c / (n + 1)))
        return self.values[n % len(self.values)]

    def describe(self) -> dict:
        out: dict = {"kind": self.kind.value, "divergent_sum": self.divergent_sum}
        if self.kind is ScheduleKind.CONSTANT:
            out["alpha"] = self.alpha
        elif self.kind is ScheduleKind.HARMONIC:
            out["c"] = self.c
        else:
            out["values"] = list(self.values)
        return out


def product_divergent(alpha: StepSchedule, beta: StepSchedule) -> bool:
    """Whether sum alpha_n * beta_n = infinity is known analytically."""
    if alpha.is_zero or beta.is_zero:
        return False
    kinds = {alpha.kind, beta.kind}
    if kinds == {ScheduleKind.HARMONIC}:
        return False
    if ScheduleKind.CONSTANT in kinds:
        other = beta if alpha.kind is ScheduleKind.CONSTANT else alpha
        return other.divergent_sum
    return False
