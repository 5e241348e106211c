"""Hypothesis batteries for the invariant-approximation results.

Each battery reports every hypothesis and the conclusion independently, so an
instance that violates a premise shows which one instead of asserting the result.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from loguru import logger

from fglab.approx.invariance import check_invariance, check_strict_gap
from fglab.approx.sets import BestApproxResult, CompactSet, best_approx
from fglab.checks.fixed_points import check_weak_compatibility
from fglab.checks.registry import InequalityKind, InequalityTag, MapBundle
from fglab.checks.scanner import check_inequality
from fglab.core.errors import FglabError
from fglab.core.interval import GridSpec
from fglab.core.maps import PiecewiseMap, is_continuous
from fglab.core.psi import PsiFunction
from fglab.core.report import CheckReport, Witness

FIXED_POINT_TOL = 1e-9

INVARIANT_APPROXIMATION = "invariant_approximation"
BEST_APPROXIMATION_FIXED_POINT = "best_approximation_fixed_point"


@dataclass(frozen=True)
class HypothesisResult:
    name: str
    passed: bool
    witness: Optional[Witness] = None
    report: Optional[CheckReport] = None
    error: Optional[str] = None

    def to_dict(self) -> dict:
        out: dict = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass(frozen=True)
class Conclusion:
    exists_z: bool
    z: Optional[float]
    residual: float

    def to_dict(self) -> dict:
        out: dict = {"exists_z": self.exists_z}
        if self.z is not None:
            out["z"] = self.z
        out["residual"] = self.residual
        return out


@dataclass(frozen=True)
class ApproximationReport:
    kind: str
    x0: float
    best: BestApproxResult
    hypotheses: tuple[HypothesisResult, ...]
    conclusion: Conclusion
    alternatives: dict = field(default_factory=dict)

    def hypothesis(self, name: str) -> HypothesisResult:
        for h in self.hypotheses:
            if h.name == name:
                return h
        raise KeyError(name)

    @property
    def failing_hypotheses(self) -> list[str]:
        return [h.name for h in self.hypotheses if not h.passed]

    @property
    def hypotheses_hold(self) -> bool:
        # both alternatives share the three M-invariances; either P_M invariance will do
        required = [
            h for h in self.hypotheses if h.name not in ("f_invariant_pm", "g_invariant_pm")
        ]
        return all(h.passed for h in required) and any(self.alternatives.values())

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "x0": self.x0,
            "best_approximation": self.best.to_dict(),
            "hypotheses": [h.to_dict() for h in self.hypotheses],
            "alternatives": dict(self.alternatives),
            "hypotheses_hold": self.hypotheses_hold,
            "conclusion": self.conclusion.to_dict(),
        }


def _from_report(name: str, run: Callable[[], CheckReport]) -> HypothesisResult:
    try:
        rep = run()
    except FglabError as err:
        logger.warning("hypothesis {} could not be evaluated: {}", name, err)
        return HypothesisResult(name, False, error=str(err))
    return HypothesisResult(name, rep.passed, witness=rep.witness, report=rep)


def _common_fixed_residual(maps: list[PiecewiseMap], x: float) -> float:
    return max(abs(m(x) - x) for m in maps)


def _x0_fixed(maps: list[PiecewiseMap], x0: float) -> HypothesisResult:
    name = "x0_common_fixed_point"
    try:
        residual = _common_fixed_residual(maps, x0)
    except FglabError as err:
        return HypothesisResult(name, False, error=str(err))
    if residual <= FIXED_POINT_TOL:
        return HypothesisResult(name, True)
    worst = max(maps, key=lambda m: abs(m(x0) - x0))
    return HypothesisResult(name, False, witness=Witness.of(x0, worst(x0), residual, 0.0))


def _conclusion(maps: list[PiecewiseMap], pm: BestApproxResult) -> Conclusion:
    best_z: Optional[float] = None
    best_r = float("inf")
    for p in pm.points:
        try:
            r = _common_fixed_residual(maps, p)
        except FglabError:
            continue
        if r < best_r:
            best_z, best_r = p, r
    if best_z is not None and best_r <= FIXED_POINT_TOL:
        return Conclusion(True, best_z, best_r)
    return Conclusion(False, None, best_r)


def _shared_battery(
    t: PiecewiseMap,
    f: PiecewiseMap,
    g: PiecewiseMap,
    m: CompactSet,
    pm: BestApproxResult,
    psi: PsiFunction,
    grid: GridSpec,
) -> list[HypothesisResult]:
    fg_min = InequalityKind(InequalityTag.FG_MIN)
    return [
        _from_report("t_continuous", lambda: is_continuous(t)),
        _from_report(
            "fg_weakly_contractive",
            lambda: check_inequality(fg_min, MapBundle(t, f, g), psi, grid),
        ),
        _from_report("weakly_compatible_t_f", lambda: check_weak_compatibility(t, f, grid)),
        _from_report("weakly_compatible_t_g", lambda: check_weak_compatibility(t, g, grid)),
        _from_report("f_invariant_m", lambda: check_invariance(f, m, grid)),
        _from_report("g_invariant_m", lambda: check_invariance(g, m, grid)),
        _from_report("t_invariant_m", lambda: check_invariance(t, m, grid)),
        _from_report("f_invariant_pm", lambda: check_invariance(f, pm, grid)),
        _from_report("g_invariant_pm", lambda: check_invariance(g, pm, grid)),
    ]


def _alternatives(hyps: list[HypothesisResult]) -> dict:
    ok = {h.name: h.passed for h in hyps}
    on_m = ok["f_invariant_m"] and ok["g_invariant_m"] and ok["t_invariant_m"]
    return {
        "alternative_i": on_m and ok["f_invariant_pm"],
        "alternative_ii": on_m and ok["g_invariant_pm"],
    }


def verify_invariant_approximation(
    t: PiecewiseMap,
    f: PiecewiseMap,
    g: PiecewiseMap,
    m: CompactSet,
    x0: float,
    psi: PsiFunction,
    grid: GridSpec = GridSpec(),
) -> ApproximationReport:
    """Best approximation of x0 out of M, the hypothesis battery, and the conclusion
    that P_M(x0) holds a common fixed point of T, f and g."""
    pm = best_approx(m, x0)
    maps = [t, f, g]
    hyps = [_x0_fixed(maps, x0), *_shared_battery(t, f, g, m, pm, psi, grid)]
    report = ApproximationReport(
        kind=INVARIANT_APPROXIMATION,
        x0=x0,
        best=pm,
        hypotheses=tuple(hyps),
        conclusion=_conclusion(maps, pm),
        alternatives=_alternatives(hyps),
    )
    logger.info(
        "invariant approximation at x0={!r}: failing {}, conclusion {}",
        x0,
        report.failing_hypotheses,
        report.conclusion.exists_z,
    )
    return report


def verify_best_approximation_fixed_point(
    t: PiecewiseMap,
    f: PiecewiseMap,
    g: PiecewiseMap,
    m: CompactSet,
    u: float,
    psi: PsiFunction,
    grid: GridSpec = GridSpec(),
) -> ApproximationReport:
    """Same battery without a fixed x0, plus the strict gap condition on P_M(u)."""
    pm = best_approx(m, u)
    maps = [t, f, g]
    hyps = _shared_battery(t, f, g, m, pm, psi, grid)
    hyps.append(_from_report("strict_gap", lambda: check_strict_gap(t, f, g, pm, grid)))
    return ApproximationReport(
        kind=BEST_APPROXIMATION_FIXED_POINT,
        x0=u,
        best=pm,
        hypotheses=tuple(hyps),
        conclusion=_conclusion(maps, pm),
        alternatives=_alternatives(hyps),
    )
