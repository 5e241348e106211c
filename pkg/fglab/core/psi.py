"""Altering-distance functions and a sampled class-membership check."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Optional

import numpy as np
import sympy as sp

from fglab.core.errors import DomainError, ExpressionError
from fglab.core.report import CheckReport, Witness

GROWTH_NOTE = (
    "divergence of psi at infinity is not decidable from samples; "
    "psi(tmax) > psi(tmax/2) is used as a finite proxy"
)

_T = sp.Symbol("t", real=True, nonnegative=True)


class PsiFamily(str, Enum):
    POWER_RATIO = "power_ratio"
    HALF_LINEAR = "half_linear"
    LINEAR = "linear"
    CUSTOM = "custom"


def _compile(expression: str) -> Callable[[np.ndarray], Any]:
    try:
        expr = sp.sympify(expression, locals={"t": _T})
    except (sp.SympifyError, SyntaxError, TypeError, AttributeError) as err:
        raise ExpressionError(f"cannot parse psi expression {expression!r}: {err}") from err
    if not isinstance(expr, sp.Expr):
        raise ExpressionError(f"psi expression {expression!r} is not a scalar expression")
    extra = expr.free_symbols - {_T}
    if extra:
        names = ", ".join(sorted(str(s) for s in extra))
        raise ExpressionError(f"psi expression {expression!r} uses unknown symbols: {names}")
    return sp.lambdify(_T, expr, modules="numpy")


@dataclass(frozen=True)
class PsiFunction:
    family: PsiFamily
    label: str = ""
    slope: float = 0.5
    expression: Optional[str] = None
    _fn: Optional[Callable[[np.ndarray], Any]] = field(
        default=None, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if not self.label:
            object.__setattr__(self, "label", self._default_label())
        if self.family is PsiFamily.LINEAR and self.slope <= 0:
            raise DomainError("linear psi needs a positive slope")
        if self.family is PsiFamily.CUSTOM:
            if not self.expression:
                raise ExpressionError("custom psi needs an expression over t")
            object.__setattr__(self, "_fn", _compile(self.expression))

    @classmethod
    def power_ratio(cls) -> PsiFunction:
        return cls(PsiFamily.POWER_RATIO)

    @classmethod
    def half_linear(cls) -> PsiFunction:
        return cls(PsiFamily.HALF_LINEAR)

    @classmethod
    def linear(cls, slope: float, label: str = "") -> PsiFunction:
        return cls(PsiFamily.LINEAR, label=label, slope=slope)

    @classmethod
    def custom(cls, expression: str, label: str = "") -> PsiFunction:
        return cls(PsiFamily.CUSTOM, label=label, expression=expression)

    def _default_label(self) -> str:
        if self.family is PsiFamily.POWER_RATIO:
            return "t^2/(1+t)"
        if self.family is PsiFamily.HALF_LINEAR:
            return "t/2"
        if self.family is PsiFamily.LINEAR:
            return f"{self.slope!r}*t"
        return str(self.expression)

    def values(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        if np.any(ts < 0):
            raise DomainError(f"psi is defined on t >= 0, got {float(ts[ts < 0].flat[0])!r}")
        if self.family is PsiFamily.POWER_RATIO:
            return ts * ts / (1.0 + ts)
        if self.family is PsiFamily.HALF_LINEAR:
            return ts / 2.0
        if self.family is PsiFamily.LINEAR:
            return self.slope * ts
        out = np.asarray(self._fn(ts), dtype=float)
        return np.broadcast_to(out, ts.shape).copy()

    def __call__(self, t: float) -> float:
        return eval_psi(self, t)

    def describe(self) -> dict:
        out: dict[str, Any] = {"family": self.family.value, "label": self.label}
        if self.family is PsiFamily.LINEAR:
            out["slope"] = self.slope
        if self.family is PsiFamily.CUSTOM:
            out["expression"] = self.expression
        return out


def eval_psi(p: PsiFunction, t: float) -> float:
    if t < 0:
        raise DomainError(f"psi is defined on t >= 0, got {t!r}")
    return float(p.values(np.array([t], dtype=float))[0])


def check_psi_class(p: PsiFunction, tmax: float = 100.0, n: int = 1001) -> CheckReport:
    """Sampled membership test: psi(0) = 0, nondecreasing, positive, still growing at tmax."""
    if tmax <= 0:
        raise ValueError("tmax must be positive")
    if n < 2:
        raise ValueError("need at least two samples")
    ts = np.linspace(0.0, tmax, n)
    vals = p.values(ts)
    grid = {"tmax": float(tmax), "samples": n}

    def fail(witness: Witness, reason: str) -> CheckReport:
        return CheckReport(
            kind="psi_class",
            passed=False,
            witness=witness,
            pairs_checked=n,
            max_margin=witness.margin,
            grid=grid,
            notes=(reason, GROWTH_NOTE),
            details={"psi": p.describe()},
        )

    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        i = int(bad[0])
        return fail(Witness.of(ts[i], ts[i], 0.0, 0.0), "psi is not finite at a sample")
    if vals[0] != 0.0:
        return fail(Witness.of(0.0, 0.0, vals[0], 0.0), "psi(0) != 0")
    drops = np.flatnonzero(np.diff(vals) < 0)
    if drops.size:
        i = int(drops[0])
        return fail(Witness.of(ts[i], ts[i + 1], vals[i], vals[i + 1]), "psi decreases")
    nonpos = np.flatnonzero(vals[1:] <= 0)
    if nonpos.size:
        i = int(nonpos[0]) + 1
        return fail(Witness.of(ts[i], ts[i], 0.0, vals[i]), "psi is not positive for t > 0")
    half = eval_psi(p, tmax / 2.0)
    if not vals[-1] > half:
        return fail(Witness.of(tmax / 2.0, tmax, half, vals[-1]), "psi stops growing")
    return CheckReport(
        kind="psi_class",
        passed=True,
        pairs_checked=n,
        max_margin=0.0,
        grid=grid,
        notes=(GROWTH_NOTE,),
        details={"psi": p.describe()},
    )
