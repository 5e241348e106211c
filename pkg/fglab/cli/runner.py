"""Execute scenario items in declaration order and match expectations."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional

from loguru import logger

from fglab.approx import (
    ApproximationReport,
    BestApproxResult,
    CompactSet,
    best_approx,
    verify_best_approximation_fixed_point,
    verify_invariant_approximation,
)
from fglab.checks import (
    InequalityKind,
    InequalityTag,
    MapBundle,
    RootScan,
    check_family,
    check_inequality,
    check_range_inclusion,
    check_weak_compatibility,
    find_coincidence_points,
    find_common_fixed_points,
)
from fglab.config.config import (
    INEQUALITY_CHECKS,
    ApproxKind,
    ApproxSpec,
    CheckKind,
    CheckSpec,
    ExpectationSpec,
    IterationSpec,
)
from fglab.config.scenario import Scenario
from fglab.core.errors import FglabError
from fglab.core.maps import is_continuous
from fglab.core.psi import check_psi_class
from fglab.core.report import CheckReport, plain
from fglab.iteration import (
    DiagnosticReport,
    IterationTrace,
    RunConfig,
    Scheme,
    coincidence_iterate,
    ishikawa_iterate,
    ishikawa_iterate_pair,
    mann_iterate,
    mann_iterate_pair,
    monotonicity_diagnostics,
    picard_iterate,
)

CHECKS = "checks"
ITERATIONS = "iterations"
APPROXIMATIONS = "approximations"
ALL_PARTS = (CHECKS, ITERATIONS, APPROXIMATIONS)


@dataclass
class ItemResult:
    name: str
    part: str
    kind: str
    result: Any = None
    trace: Optional[IterationTrace] = None
    diagnostics: Optional[DiagnosticReport] = None
    error: Optional[str] = None

    @property
    def passed(self) -> Optional[bool]:
        if isinstance(self.result, CheckReport):
            return self.result.passed
        return None

    def to_dict(self) -> dict:
        out: Dict[str, Any] = {"name": self.name, "part": self.part, "kind": self.kind}
        if self.error is not None:
            out["error"] = self.error
            return out
        if self.trace is not None:
            out["result"] = self.trace.to_summary()
            if self.diagnostics is not None:
                out["result"]["diagnostics"] = self.diagnostics.to_dict()
        elif self.result is not None:
            out["result"] = plain(self.result)
        return out


@dataclass
class ExpectationResult:
    item: str
    met: bool
    messages: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out: Dict[str, Any] = {"item": self.item, "met": self.met}
        if self.messages:
            out["messages"] = list(self.messages)
        return out


@dataclass
class ScenarioOutcome:
    scenario: str
    description: str
    items: List[ItemResult] = field(default_factory=list)
    expectations: List[ExpectationResult] = field(default_factory=list)

    @property
    def errors(self) -> List[ItemResult]:
        return [i for i in self.items if i.error is not None]

    @property
    def first_unmet(self) -> Optional[ExpectationResult]:
        return next((e for e in self.expectations if not e.met), None)

    @property
    def ok(self) -> bool:
        return not self.errors and self.first_unmet is None

    @property
    def exit_code(self) -> int:
        if self.errors:
            return 2
        return 0 if self.first_unmet is None else 1

    def item(self, name: str) -> ItemResult:
        for it in self.items:
            if it.name == name:
                return it
        raise KeyError(name)

    def to_report(self) -> dict:
        out: Dict[str, Any] = {
            "schema_version": 1,
            "scenario": self.scenario,
            "description": self.description,
            "items": [i.to_dict() for i in self.items],
            "expectations": [e.to_dict() for e in self.expectations],
            "ok": self.ok,
        }
        unmet = self.first_unmet
        if unmet is not None or self.errors:
            out["diagnostics"] = {
                "first_unmet_expectation": unmet.item if unmet else None,
                "errors": [{"item": i.name, "error": i.error} for i in self.errors],
            }
        return out


def _run_check(sc: Scenario, spec: CheckSpec) -> Any:
    s = sc.settings
    grid = sc.grid
    psi = spec.psi.build() if spec.psi is not None else sc.psi
    tol = s.resolve("tol", spec.tol)
    residual_tol = s.resolve("residual_tol", spec.residual_tol)
    roles = {role: sc.map(name) for role, name in spec.maps.items()}
    if spec.kind in INEQUALITY_CHECKS:
        kind = InequalityKind(InequalityTag(spec.kind.value), spec.k)
        bundle = MapBundle(roles["t"], roles.get("f"), roles.get("g"))
        return check_inequality(kind, bundle, psi, grid, tol, spec.probes)
    if spec.kind is CheckKind.FAMILY_MIN:
        members = [sc.map(n) for n in spec.members]
        return check_family(members, roles["f"], roles["g"], psi, grid, tol, spec.probes)
    if spec.kind is CheckKind.FIXED_POINTS:
        return find_common_fixed_points([sc.map(n) for n in spec.members], grid, residual_tol)
    if spec.kind is CheckKind.COINCIDENCE_POINTS:
        return find_coincidence_points(roles["a"], roles["b"], grid, residual_tol)
    if spec.kind is CheckKind.WEAK_COMPATIBILITY:
        return check_weak_compatibility(roles["a"], roles["b"], grid, residual_tol)
    if spec.kind is CheckKind.RANGE_INCLUSION:
        return check_range_inclusion(roles["inner"], roles["outer"], spec.closure, tol)
    if spec.kind is CheckKind.CONTINUITY:
        return is_continuous(roles["t"], tol)
    return check_psi_class(psi, spec.tmax, spec.samples)


def _run_iteration(sc: Scenario, spec: IterationSpec) -> IterationTrace:
    s = sc.settings
    cfg = RunConfig(
        x0=spec.x0,
        max_iter=s.resolve("max_iter", spec.max_iter),
        conv_tol=s.resolve("conv_tol", spec.conv_tol),
        solve_tol=s.resolve("solve_tol", spec.solve_tol),
        target=spec.target,
    )
    t = sc.map(spec.maps["t"])
    f = sc.map(spec.maps["f"]) if "f" in spec.maps else None
    g = sc.map(spec.maps["g"]) if "g" in spec.maps else None
    alpha = spec.alpha.build() if spec.alpha is not None else None
    beta = spec.beta.build() if spec.beta is not None else None
    if spec.scheme is Scheme.PICARD:
        return picard_iterate(t, cfg)
    if spec.scheme is Scheme.COINCIDENCE:
        return coincidence_iterate(t, f, g, cfg)
    if spec.scheme is Scheme.MANN:
        return mann_iterate(t, f, g, alpha, cfg)
    if spec.scheme is Scheme.MANN_PAIR:
        return mann_iterate_pair(t, f, alpha, cfg)
    if spec.scheme is Scheme.ISHIKAWA:
        return ishikawa_iterate(t, f, g, alpha, beta, cfg)
    return ishikawa_iterate_pair(t, f, alpha, beta, cfg)


def _run_approximation(sc: Scenario, spec: ApproxSpec) -> Any:
    m = CompactSet.of(*(iv.build() for iv in spec.set))
    if spec.kind is ApproxKind.BEST_APPROXIMATION:
        return best_approx(m, spec.x0)
    t, f, g = (sc.map(spec.maps[r]) for r in ("t", "f", "g"))
    if spec.kind is ApproxKind.INVARIANT_APPROXIMATION:
        return verify_invariant_approximation(t, f, g, m, spec.x0, sc.psi, sc.grid)
    return verify_best_approximation_fixed_point(t, f, g, m, spec.x0, sc.psi, sc.grid)


def _check_item(sc: Scenario, spec: CheckSpec) -> ItemResult:
    return ItemResult(spec.name, CHECKS, spec.kind.value, _run_check(sc, spec))


def _iteration_item(sc: Scenario, spec: IterationSpec) -> ItemResult:
    trace = _run_iteration(sc, spec)
    diag = None
    if spec.diagnostics and len(trace.residuals) >= 2:
        diag = monotonicity_diagnostics(trace, sc.psi)
    return ItemResult(spec.name, ITERATIONS, spec.scheme.value, trace=trace, diagnostics=diag)


def _approximation_item(sc: Scenario, spec: ApproxSpec) -> ItemResult:
    return ItemResult(spec.name, APPROXIMATIONS, spec.kind.value, _run_approximation(sc, spec))


def _guarded(part: str, kind: str, spec: Any, run: Callable[[], ItemResult]) -> ItemResult:
    try:
        return run()
    except (FglabError, ValueError) as err:
        logger.warning("{} '{}' failed: {}", part, spec.name, err)
        return ItemResult(spec.name, part, kind, error=f"{type(err).__name__}: {err}")


def run_items(sc: Scenario, parts: Iterable[str] = ALL_PARTS) -> List[ItemResult]:
    parts = set(parts)
    results: List[ItemResult] = []
    if CHECKS in parts:
        for c in sc.checks:
            results.append(_guarded(CHECKS, c.kind.value, c, lambda c=c: _check_item(sc, c)))
    if ITERATIONS in parts:
        for it in sc.iterations:
            results.append(
                _guarded(ITERATIONS, it.scheme.value, it, lambda it=it: _iteration_item(sc, it))
            )
    if APPROXIMATIONS in parts:
        for a in sc.approximations:
            results.append(
                _guarded(APPROXIMATIONS, a.kind.value, a, lambda a=a: _approximation_item(sc, a))
            )
    return results


def _close(a: float, b: float, tol: float) -> bool:
    return math.isclose(a, b, rel_tol=0.0, abs_tol=tol)


def _match_witness(item: ItemResult, exp: ExpectationSpec, msgs: List[str]) -> None:
    rep = item.result
    w = exp.witness
    if not isinstance(rep, CheckReport):
        msgs.append("witness expected but the item is not a pass/fail check")
        return
    actual = None
    if w.x is not None and w.y is not None:
        actual = rep.probe_at(w.x, w.y, exp.tol)
        if actual is not None and exp.expected == "fail" and not actual.violated:
            msgs.append(f"probe at ({w.x!r}, {w.y!r}) does not violate the inequality")
    if actual is None:
        actual = rep.witness
    if actual is None:
        msgs.append("no witness reported")
        return
    for key in ("x", "y", "lhs", "rhs"):
        want = getattr(w, key)
        got = getattr(actual, key)
        if want is not None and not _close(got, want, exp.tol):
            msgs.append(f"witness {key} = {got!r}, expected {want!r}")


def _match_points(got: Iterable[float], want: List[float], tol: float, msgs: List[str]) -> None:
    got = sorted(got)
    want = sorted(want)
    if len(got) != len(want) or not all(_close(a, b, tol) for a, b in zip(got, want)):
        msgs.append(f"points = {got!r}, expected {want!r}")


def check_expectation(item: ItemResult, exp: ExpectationSpec) -> ExpectationResult:
    msgs: List[str] = []
    if item.error is not None:
        return ExpectationResult(exp.item, False, [f"item failed: {item.error}"])
    res = item.result
    if exp.expected is not None:
        if item.passed is None:
            msgs.append("pass/fail expected but the item has no pass/fail outcome")
        elif item.passed != (exp.expected == "pass"):
            msgs.append(f"expected {exp.expected}, got {'pass' if item.passed else 'fail'}")
    if exp.witness is not None:
        _match_witness(item, exp, msgs)
    if exp.points is not None:
        if isinstance(res, RootScan):
            if res.whole_domain:
                msgs.append("every grid point qualified; expected isolated points")
            else:
                _match_points(res.points, exp.points, exp.tol, msgs)
        elif isinstance(res, BestApproxResult):
            _match_points(res.points, exp.points, exp.tol, msgs)
        else:
            msgs.append("points expected but the item produced none")
    if exp.whole_domain is not None:
        if not isinstance(res, RootScan):
            msgs.append("whole_domain expected but the item is not a point scan")
        elif res.whole_domain != exp.whole_domain:
            msgs.append(f"whole_domain = {res.whole_domain}, expected {exp.whole_domain}")
    if exp.dist is not None:
        if not isinstance(res, BestApproxResult):
            msgs.append("dist expected but the item is not a best approximation")
        elif not _close(res.dist, exp.dist, exp.tol):
            msgs.append(f"dist = {res.dist!r}, expected {exp.dist!r}")
    _match_trace(item, exp, msgs)
    _match_approximation(item, exp, msgs)
    return ExpectationResult(exp.item, not msgs, msgs)


def _match_trace(item: ItemResult, exp: ExpectationSpec, msgs: List[str]) -> None:
    wants_trace = (exp.status, exp.limit, exp.max_iterations, exp.diagnostics)
    if all(v is None for v in wants_trace):
        return
    trace = item.trace
    if trace is None:
        msgs.append("iteration outcome expected but the item is not an iteration")
        return
    status = trace.status
    if exp.status is not None and status.kind is not exp.status:
        msgs.append(f"status = {status.kind.value}, expected {exp.status.value}")
    if exp.limit is not None:
        if status.limit is None or not _close(status.limit, exp.limit, exp.tol):
            msgs.append(f"limit = {status.limit!r}, expected {exp.limit!r}")
    if exp.max_iterations is not None and status.at_iter > exp.max_iterations:
        msgs.append(f"stopped at iteration {status.at_iter}, expected <= {exp.max_iterations}")
    if exp.diagnostics is not None:
        diag = item.diagnostics
        if diag is None:
            msgs.append("diagnostics expected but none were run")
        elif diag.passed != (exp.diagnostics == "pass"):
            msgs.append(f"diagnostics first violated at step {diag.first_violation}")


def _match_approximation(item: ItemResult, exp: ExpectationSpec, msgs: List[str]) -> None:
    if exp.conclusion is None and exp.failing_hypotheses is None:
        return
    rep = item.result
    if not isinstance(rep, ApproximationReport):
        msgs.append("hypothesis battery expected but the item is not one")
        return
    if exp.conclusion is not None and rep.conclusion.exists_z != exp.conclusion:
        msgs.append(f"conclusion = {rep.conclusion.exists_z}, expected {exp.conclusion}")
    if exp.failing_hypotheses is not None and rep.failing_hypotheses != exp.failing_hypotheses:
        msgs.append(
            f"failing hypotheses = {rep.failing_hypotheses}, expected {exp.failing_hypotheses}"
        )


def run_scenario(sc: Scenario, parts: Iterable[str] = ALL_PARTS) -> ScenarioOutcome:
    """Run the selected parts of a scenario; expectations on skipped items are ignored."""
    logger.info("scenario {}: start", sc.name)
    items = run_items(sc, parts)
    by_name = {i.name: i for i in items}
    expectations = [
        check_expectation(by_name[e.item], e) for e in sc.expectations if e.item in by_name
    ]
    outcome = ScenarioOutcome(sc.name, sc.description, items, expectations)
    logger.info("scenario {}: ok={}", sc.name, outcome.ok)
    return outcome
