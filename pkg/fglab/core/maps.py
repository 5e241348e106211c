"""Piecewise selfmaps of a one-dimensional domain."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import ClassVar, Optional, Union

import numpy as np
from loguru import logger

from fglab.core.errors import DomainError, NoPreimage
from fglab.core.interval import Domain, GridSpec, Interval
from fglab.core.report import CheckReport, Witness


class BranchKind(str, Enum):
    AFFINE = "affine"
    CONSTANT = "constant"
    LINEAR_FRACTIONAL = "linear_fractional"
    POWER = "power"


def _monotone_image(lo_val: float, hi_val: float, iv: Interval, increasing: bool) -> Interval:
    if iv.is_degenerate:
        return Interval.point(lo_val)
    if increasing:
        return Interval(lo_val, hi_val, iv.lo_closed, iv.hi_closed)
    return Interval(hi_val, lo_val, iv.hi_closed, iv.lo_closed)


@dataclass(frozen=True)
class Affine:
    slope: float
    intercept: float = 0.0
    kind: ClassVar[BranchKind] = BranchKind.AFFINE

    def __post_init__(self) -> None:
        if self.slope == 0:
            raise DomainError("affine branch needs a nonzero slope (use a constant branch)")

    @property
    def increasing(self) -> bool:
        return self.slope > 0

    def at(self, x: float) -> float:
        return self.slope * x + self.intercept

    def at_array(self, xs: np.ndarray) -> np.ndarray:
        return self.slope * xs + self.intercept

    def solve(self, y: float) -> Optional[float]:
        return (y - self.intercept) / self.slope

    def image(self, iv: Interval) -> Interval:
        return _monotone_image(self.at(iv.lo), self.at(iv.hi), iv, self.increasing)


@dataclass(frozen=True)
class Constant:
    value: float
    kind: ClassVar[BranchKind] = BranchKind.CONSTANT

    increasing: ClassVar[bool] = False

    def at(self, x: float) -> float:
        return self.value

    def at_array(self, xs: np.ndarray) -> np.ndarray:
        return np.full(np.shape(xs), self.value, dtype=float)

    def solve(self, y: float) -> Optional[float]:
        return None

    def image(self, iv: Interval) -> Interval:
        return Interval.point(self.value)


@dataclass(frozen=True)
class LinearFractional:
    """x -> (a x + b) / (c x + d)."""

    a: float
    b: float
    c: float
    d: float
    kind: ClassVar[BranchKind] = BranchKind.LINEAR_FRACTIONAL

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c == 0:
            raise DomainError("linear-fractional branch is degenerate (a*d - b*c == 0)")
        if self.c == 0 and self.d == 0:
            raise DomainError("linear-fractional branch has a zero denominator")

    @property
    def pole(self) -> Optional[float]:
        return None if self.c == 0 else -self.d / self.c

    @property
    def increasing(self) -> bool:
        return self.a * self.d - self.b * self.c > 0

    def at(self, x: float) -> float:
        return (self.a * x + self.b) / (self.c * x + self.d)

    def at_array(self, xs: np.ndarray) -> np.ndarray:
        return (self.a * xs + self.b) / (self.c * xs + self.d)

    def solve(self, y: float) -> Optional[float]:
        den = self.c * y - self.a
        if den == 0:
            return None
        return (self.b - self.d * y) / den

    def image(self, iv: Interval) -> Interval:
        return _monotone_image(self.at(iv.lo), self.at(iv.hi), iv, self.increasing)


@dataclass(frozen=True)
class Power:
    """x -> coef * x**exponent on a non-negative subdomain."""

    coef: float
    exponent: float
    kind: ClassVar[BranchKind] = BranchKind.POWER

    def __post_init__(self) -> None:
        if self.coef == 0:
            raise DomainError("power branch needs a nonzero coefficient")
        if self.exponent <= 0:
            raise DomainError("power branch needs a positive exponent")

    @property
    def increasing(self) -> bool:
        return self.coef > 0

    def at(self, x: float) -> float:
        return self.coef * x**self.exponent

    def at_array(self, xs: np.ndarray) -> np.ndarray:
        return self.coef * np.power(xs, self.exponent)

    def solve(self, y: float) -> Optional[float]:
        ratio = y / self.coef
        if ratio < 0:
            return None
        return ratio ** (1.0 / self.exponent)

    def image(self, iv: Interval) -> Interval:
        return _monotone_image(self.at(iv.lo), self.at(iv.hi), iv, self.increasing)


BranchFunction = Union[Affine, Constant, LinearFractional, Power]


@dataclass(frozen=True)
class Branch:
    subdomain: Interval
    kind: BranchFunction

    def __post_init__(self) -> None:
        if isinstance(self.kind, LinearFractional):
            pole = self.kind.pole
            if pole is not None and self.subdomain.closure().contains(pole):
                raise DomainError(
                    f"linear-fractional pole {pole!r} lies in the closure of {self.subdomain}"
                )
        if isinstance(self.kind, Power) and self.subdomain.lo < 0:
            raise DomainError(f"power branch needs a non-negative subdomain, got {self.subdomain}")

    @property
    def is_constant(self) -> bool:
        return isinstance(self.kind, Constant)

    def contains(self, x: float) -> bool:
        return self.subdomain.contains(x)

    def at(self, x: float) -> float:
        return self.kind.at(x)

    def image(self) -> Interval:
        return self.kind.image(self.subdomain)


@dataclass(frozen=True)
class PiecewiseMap:
    name: str
    branches: tuple[Branch, ...]

    def __post_init__(self) -> None:
        branches = tuple(self.branches)
        object.__setattr__(self, "branches", branches)
        if not branches:
            raise DomainError(f"map '{self.name}' has no branches")
        for i, a in enumerate(branches):
            for b in branches[i + 1 :]:
                if a.subdomain.overlaps(b.subdomain):
                    raise DomainError(
                        f"map '{self.name}': branch subdomains {a.subdomain} and "
                        f"{b.subdomain} overlap"
                    )

    @classmethod
    def identity(cls, domain: Domain, name: str = "id") -> PiecewiseMap:
        return cls(name, tuple(Branch(iv, Affine(1.0, 0.0)) for iv in domain))

    @cached_property
    def domain(self) -> Domain:
        return Domain.of(*(b.subdomain for b in self.branches))

    def branch_for(self, x: float) -> Branch:
        for branch in self.branches:
            if branch.contains(x):
                return branch
        raise DomainError(f"map '{self.name}' is not defined at x = {x!r}")

    def __call__(self, x: float) -> float:
        return float(self.branch_for(x).at(x))

    def branch_index(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        idx = np.full(xs.shape, -1, dtype=int)
        for i, branch in enumerate(self.branches):
            mask = branch.subdomain.contains_array(xs) & (idx < 0)
            idx[mask] = i
        return idx

    def evaluate(self, xs: np.ndarray) -> np.ndarray:
        """Vectorised evaluation; raises DomainError at the first uncovered point."""
        xs = np.asarray(xs, dtype=float)
        out = np.empty(xs.shape, dtype=float)
        idx = self.branch_index(xs)
        if np.any(idx < 0):
            bad = xs[idx < 0].flat[0]
            raise DomainError(f"map '{self.name}' is not defined at x = {float(bad)!r}")
        for i, branch in enumerate(self.branches):
            mask = idx == i
            if np.any(mask):
                out[mask] = branch.kind.at_array(xs[mask])
        return out

    def breakpoints(self, spec: GridSpec) -> np.ndarray:
        """Branch endpoints, replaced by an inset point on the branch side when open."""
        pts: list[float] = []
        for branch in self.branches:
            iv = branch.subdomain
            inset = min(spec.inset_for(iv), iv.length / 2.0) if iv.length > 0 else 0.0
            pts.append(iv.lo if iv.lo_closed else iv.lo + inset)
            pts.append(iv.hi if iv.hi_closed else iv.hi - inset)
        return np.unique(np.asarray(pts, dtype=float))

    def image(self, merge_tol: float = 1e-12) -> Domain:
        return Domain.of(*(b.image() for b in self.branches), merge_tol=merge_tol)

    def same_domain(self, other: PiecewiseMap) -> bool:
        return self.domain == other.domain


def eval_map(m: PiecewiseMap, x: float) -> float:
    return m(x)


def invert_map(m: PiecewiseMap, y: float, anchor: float, tol: float = 1e-10) -> float:
    """Solve m(x) = y, choosing the preimage nearest to ``anchor`` (ties: smaller x).

    When ``m(anchor) == y`` exactly the anchor itself is returned, so a scheme whose
    right-hand side did not move stays put.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if m.domain.contains(anchor) and m(anchor) == y:
        return anchor
    candidates: list[float] = []
    for branch in m.branches:
        iv = branch.subdomain
        if branch.is_constant:
            if abs(branch.at(iv.lo) - y) <= tol:
                candidates.append(iv.nearest_member(anchor, tol))
            continue
        x = branch.kind.solve(y)
        if x is None or not math.isfinite(x):
            continue
        if iv.contains(x):
            candidates.append(x)
        elif iv.contains_with_tol(x, tol):
            projected = iv.nearest_member(x, tol)
            if iv.contains(projected) and abs(branch.at(projected) - y) <= tol:
                candidates.append(projected)
    if not candidates:
        logger.debug("no preimage of {} under {} (anchor {})", y, m.name, anchor)
        raise NoPreimage(m.name, y)
    return min(candidates, key=lambda c: (abs(c - anchor), c))


def map_image(m: PiecewiseMap, merge_tol: float = 1e-12) -> Domain:
    """Exact union of branch images."""
    return m.image(merge_tol)


def is_continuous(m: PiecewiseMap, tol: float = 1e-12) -> CheckReport:
    """Compares one-sided limits wherever two branches meet."""
    ordered = sorted(m.branches, key=lambda b: (b.subdomain.lo, b.subdomain.hi))
    worst: Optional[Witness] = None
    junctions: list[float] = []
    max_jump = 0.0
    for left, right in zip(ordered, ordered[1:]):
        if left.subdomain.hi != right.subdomain.lo:
            continue
        x = left.subdomain.hi
        junctions.append(x)
        jump = abs(left.at(x) - right.at(x))
        max_jump = max(max_jump, jump)
        if jump > tol and (worst is None or jump > worst.margin):
            worst = Witness.of(x, x, jump, 0.0)
    return CheckReport(
        kind="continuity",
        passed=worst is None,
        witness=worst,
        pairs_checked=len(junctions),
        max_margin=max_jump,
        tol=tol,
        details={"map": m.name, "junctions": junctions},
    )
