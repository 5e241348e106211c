"""Pydantic schema of scenario files and lab settings."""
from __future__ import annotations

from enum import Enum
from typing import Any, ClassVar, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, model_validator
from typing_extensions import Annotated

from fglab.core.interval import GridSpec, Interval
from fglab.core.maps import (
    Affine,
    Branch,
    BranchKind,
    Constant,
    LinearFractional,
    PiecewiseMap,
    Power,
)
from fglab.core.numbers import parse_real
from fglab.core.psi import PsiFamily, PsiFunction
from fglab.iteration.models import Scheme, StatusKind
from fglab.iteration.schedules import ScheduleKind, StepSchedule

SCHEMA_VERSION = 1

Real = Annotated[float, BeforeValidator(parse_real)]


class _Spec(BaseModel):
    model_config = ConfigDict(extra="forbid")


class IntervalSpec(_Spec):
    lo: Real
    hi: Real
    lo_closed: bool = True
    hi_closed: bool = True

    def build(self) -> Interval:
        return Interval(self.lo, self.hi, self.lo_closed, self.hi_closed)


class BranchSpec(_Spec):
    subdomain: IntervalSpec
    kind: BranchKind
    slope: Optional[Real] = None
    intercept: Real = 0.0
    value: Optional[Real] = None
    a: Optional[Real] = None
    b: Optional[Real] = None
    c: Optional[Real] = None
    d: Optional[Real] = None
    coef: Optional[Real] = None
    exponent: Optional[Real] = None

    @model_validator(mode="after")
    def _params_present(self) -> BranchSpec:
        required = {
            BranchKind.AFFINE: ("slope",),
            BranchKind.CONSTANT: ("value",),
            BranchKind.LINEAR_FRACTIONAL: ("a", "b", "c", "d"),
            BranchKind.POWER: ("coef", "exponent"),
        }[self.kind]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.kind.value} branch needs: {', '.join(missing)}")
        return self

    def build(self) -> Branch:
        if self.kind is BranchKind.AFFINE:
            fn = Affine(self.slope, self.intercept)
        elif self.kind is BranchKind.CONSTANT:
            fn = Constant(self.value)
        elif self.kind is BranchKind.LINEAR_FRACTIONAL:
            fn = LinearFractional(self.a, self.b, self.c, self.d)
        else:
            fn = Power(self.coef, self.exponent)
        return Branch(self.subdomain.build(), fn)


class MapSpec(_Spec):
    name: str
    identity: bool = False
    branches: List[BranchSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def _branches_or_identity(self) -> MapSpec:
        if self.identity == bool(self.branches):
            raise ValueError(f"map '{self.name}' needs either branches or identity: true")
        return self

    def build(self, domain) -> PiecewiseMap:
        if self.identity:
            return PiecewiseMap.identity(domain, self.name)
        return PiecewiseMap(self.name, tuple(b.build() for b in self.branches))


class PsiSpec(_Spec):
    family: PsiFamily = PsiFamily.POWER_RATIO
    slope: Optional[Real] = None
    expression: Optional[str] = None
    label: str = ""

    def build(self) -> PsiFunction:
        if self.family is PsiFamily.LINEAR:
            if self.slope is None:
                raise ValueError("linear psi needs a slope")
            return PsiFunction.linear(self.slope, self.label)
        if self.family is PsiFamily.CUSTOM:
            return PsiFunction.custom(self.expression or "", self.label)
        return PsiFunction(self.family, label=self.label)


class GridSettings(_Spec):
    points_per_interval: Optional[int] = None
    inset: Optional[Real] = None
    relative_inset: Optional[Real] = None
    extra_points: List[Real] = Field(default_factory=list)

    def build(self, grid_n: Optional[int] = None, inset: Optional[float] = None) -> GridSpec:
        """Flags given here win over the scenario's own grid."""
        kwargs: Dict[str, Any] = {"extra_points": tuple(self.extra_points)}
        n = grid_n if grid_n is not None else self.points_per_interval
        if n is not None:
            kwargs["points_per_interval"] = n
        abs_inset = inset if inset is not None else self.inset
        if abs_inset is not None:
            kwargs["inset"] = abs_inset
        if self.relative_inset is not None:
            kwargs["relative_inset"] = self.relative_inset
        return GridSpec(**kwargs)


def _schedule_shorthand(value: Any) -> Any:
    if isinstance(value, (int, float, str)) and not isinstance(value, bool):
        return {"kind": "constant", "alpha": value}
    return value


class ScheduleSpec(_Spec):
    kind: ScheduleKind
    alpha: Optional[Real] = None
    c: Real = 1.0
    values: List[Real] = Field(default_factory=list)
    divergent_sum: bool = False

    def build(self) -> StepSchedule:
        if self.kind is ScheduleKind.CONSTANT:
            if self.alpha is None:
                raise ValueError("constant schedule needs alpha")
            return StepSchedule.constant(self.alpha)
        if self.kind is ScheduleKind.HARMONIC:
            return StepSchedule.harmonic(self.c)
        return StepSchedule.table(self.values, divergent_sum=self.divergent_sum)


Schedule = Annotated[ScheduleSpec, BeforeValidator(_schedule_shorthand)]


class CheckKind(str, Enum):
    CONTRACTION = "contraction"
    WEAKLY_CONTRACTIVE = "weakly_contractive"
    WEAKLY_CONTRACTIVE_WRT = "weakly_contractive_wrt"
    CROSS = "cross"
    FG_MIN = "fg_min"
    FG_MAX = "fg_max"
    FAMILY_MIN = "family_min"
    FIXED_POINTS = "fixed_points"
    COINCIDENCE_POINTS = "coincidence_points"
    WEAK_COMPATIBILITY = "weak_compatibility"
    RANGE_INCLUSION = "range_inclusion"
    CONTINUITY = "continuity"
    PSI_CLASS = "psi_class"


INEQUALITY_CHECKS = {
    CheckKind.CONTRACTION,
    CheckKind.WEAKLY_CONTRACTIVE,
    CheckKind.WEAKLY_CONTRACTIVE_WRT,
    CheckKind.CROSS,
    CheckKind.FG_MIN,
    CheckKind.FG_MAX,
}

# map roles each check kind reads from its ``maps`` mapping
CHECK_ROLES: Dict[CheckKind, Tuple[str, ...]] = {
    CheckKind.CONTRACTION: ("t",),
    CheckKind.WEAKLY_CONTRACTIVE: ("t",),
    CheckKind.WEAKLY_CONTRACTIVE_WRT: ("t", "f"),
    CheckKind.CROSS: ("t", "f", "g"),
    CheckKind.FG_MIN: ("t", "f", "g"),
    CheckKind.FG_MAX: ("t", "f", "g"),
    CheckKind.FAMILY_MIN: ("f", "g"),
    CheckKind.FIXED_POINTS: (),
    CheckKind.COINCIDENCE_POINTS: ("a", "b"),
    CheckKind.WEAK_COMPATIBILITY: ("a", "b"),
    CheckKind.RANGE_INCLUSION: ("inner", "outer"),
    CheckKind.CONTINUITY: ("t",),
    CheckKind.PSI_CLASS: (),
}


class CheckSpec(_Spec):
    name: str
    kind: CheckKind
    maps: Dict[str, str] = Field(default_factory=dict)
    members: List[str] = Field(default_factory=list)
    k: Optional[Real] = None
    psi: Optional[PsiSpec] = None
    tol: Optional[Real] = None
    residual_tol: Optional[Real] = None
    probes: List[Tuple[Real, Real]] = Field(default_factory=list)
    closure: bool = False
    tmax: Real = 100.0
    samples: int = 1001

    @model_validator(mode="after")
    def _roles_present(self) -> CheckSpec:
        missing = [r for r in CHECK_ROLES[self.kind] if r not in self.maps]
        if missing:
            raise ValueError(
                f"check '{self.name}' ({self.kind.value}) needs map role(s): {missing}"
            )
        if self.kind in (CheckKind.FAMILY_MIN, CheckKind.FIXED_POINTS) and not self.members:
            raise ValueError(f"check '{self.name}' ({self.kind.value}) needs members")
        if self.kind is CheckKind.CONTRACTION and self.k is None:
            raise ValueError(f"check '{self.name}' (contraction) needs k")
        return self

    def referenced_maps(self) -> List[str]:
        return [*self.maps.values(), *self.members]


PAIR_SCHEMES = {Scheme.MANN_PAIR, Scheme.ISHIKAWA_PAIR}
SCHEME_ROLES: Dict[Scheme, Tuple[str, ...]] = {
    Scheme.PICARD: ("t",),
    Scheme.COINCIDENCE: ("t", "f", "g"),
    Scheme.MANN: ("t", "f", "g"),
    Scheme.ISHIKAWA: ("t", "f", "g"),
    Scheme.MANN_PAIR: ("t", "f"),
    Scheme.ISHIKAWA_PAIR: ("t", "f"),
}


class IterationSpec(_Spec):
    name: str
    scheme: Scheme
    maps: Dict[str, str]
    x0: Real
    alpha: Optional[Schedule] = None
    beta: Optional[Schedule] = None
    max_iter: Optional[int] = None
    conv_tol: Optional[Real] = None
    solve_tol: Optional[Real] = None
    target: Optional[Real] = None
    diagnostics: bool = False

    @model_validator(mode="after")
    def _scheme_inputs(self) -> IterationSpec:
        missing = [r for r in SCHEME_ROLES[self.scheme] if r not in self.maps]
        if missing:
            raise ValueError(f"iteration '{self.name}' needs map role(s): {missing}")
        needs_alpha = self.scheme not in (Scheme.PICARD, Scheme.COINCIDENCE)
        if needs_alpha and self.alpha is None:
            raise ValueError(f"iteration '{self.name}' ({self.scheme.value}) needs alpha")
        if self.scheme in (Scheme.ISHIKAWA, Scheme.ISHIKAWA_PAIR) and self.beta is None:
            raise ValueError(f"iteration '{self.name}' ({self.scheme.value}) needs beta")
        return self

    def referenced_maps(self) -> List[str]:
        return list(self.maps.values())


class ApproxKind(str, Enum):
    BEST_APPROXIMATION = "best_approximation"
    INVARIANT_APPROXIMATION = "invariant_approximation"
    BEST_APPROXIMATION_FIXED_POINT = "best_approximation_fixed_point"


class ApproxSpec(_Spec):
    name: str
    kind: ApproxKind = ApproxKind.INVARIANT_APPROXIMATION
    set: List[IntervalSpec] = Field(min_length=1)
    x0: Real
    maps: Dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _roles_present(self) -> ApproxSpec:
        if self.kind is not ApproxKind.BEST_APPROXIMATION:
            missing = [r for r in ("t", "f", "g") if r not in self.maps]
            if missing:
                raise ValueError(f"approximation '{self.name}' needs map role(s): {missing}")
        return self

    def referenced_maps(self) -> List[str]:
        return list(self.maps.values())


class WitnessSpec(_Spec):
    x: Optional[Real] = None
    y: Optional[Real] = None
    lhs: Optional[Real] = None
    rhs: Optional[Real] = None


class ExpectationSpec(_Spec):
    item: str
    expected: Optional[Literal["pass", "fail"]] = None
    witness: Optional[WitnessSpec] = None
    points: Optional[List[Real]] = None
    whole_domain: Optional[bool] = None
    status: Optional[StatusKind] = None
    limit: Optional[Real] = None
    max_iterations: Optional[int] = None
    diagnostics: Optional[Literal["pass", "fail"]] = None
    conclusion: Optional[bool] = None
    failing_hypotheses: Optional[List[str]] = None
    dist: Optional[Real] = None
    tol: Real = 1e-9


class ScenarioConfig(_Spec):
    schema_version: Literal[1]
    name: str = Field(min_length=1)
    description: str = ""
    domain: List[IntervalSpec] = Field(min_length=1)
    grid: GridSettings = Field(default_factory=GridSettings)
    psi: PsiSpec = Field(default_factory=PsiSpec)
    maps: List[MapSpec] = Field(default_factory=list)
    checks: List[CheckSpec] = Field(default_factory=list)
    iterations: List[IterationSpec] = Field(default_factory=list)
    approximations: List[ApproxSpec] = Field(default_factory=list)
    expectations: List[ExpectationSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def _references(self) -> ScenarioConfig:
        map_names = [m.name for m in self.maps]
        dup = {n for n in map_names if map_names.count(n) > 1}
        if dup:
            raise ValueError(f"duplicate map name(s): {sorted(dup)}")
        items = [*self.checks, *self.iterations, *self.approximations]
        item_names = [i.name for i in items]
        dup = {n for n in item_names if item_names.count(n) > 1}
        if dup:
            raise ValueError(f"duplicate item name(s): {sorted(dup)}")
        known = set(map_names)
        for item in items:
            unknown = [n for n in item.referenced_maps() if n not in known]
            if unknown:
                raise ValueError(f"item '{item.name}' references unknown map(s): {unknown}")
        declared = set(item_names)
        for exp in self.expectations:
            if exp.item not in declared:
                raise ValueError(f"expectation references undeclared item '{exp.item}'")
        return self


class LabSettings(BaseModel):
    """Run-wide overrides. ``None`` means "not set here"; see :meth:`resolve`."""

    model_config = ConfigDict(extra="forbid")

    grid_n: Optional[int] = None
    inset: Optional[Real] = None
    tol: Optional[Real] = None
    residual_tol: Optional[Real] = None
    max_iter: Optional[int] = None
    conv_tol: Optional[Real] = None
    solve_tol: Optional[Real] = None
    log_level: Optional[str] = None
    out_dir: Optional[str] = None

    DEFAULTS: ClassVar[Dict[str, Any]] = {
        "tol": 1e-12,
        "residual_tol": 1e-9,
        "max_iter": 10_000,
        "conv_tol": 1e-8,
        "solve_tol": 1e-10,
        "log_level": "WARNING",
        "out_dir": "fglab-out",
    }

    def merged(self, **overrides: Any) -> LabSettings:
        """Settings with every non-None override applied on top."""
        data = self.model_dump()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return LabSettings.model_validate(data)

    def resolve(self, key: str, item_value: Any = None) -> Any:
        """Settings > scenario item > built-in default."""
        own = getattr(self, key)
        if own is not None:
            return own
        if item_value is not None:
            return item_value
        return self.DEFAULTS.get(key)
