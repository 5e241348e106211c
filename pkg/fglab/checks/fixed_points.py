"""Common fixed points, coincidence points and range inclusions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Optional, Sequence

import numpy as np
from loguru import logger

from fglab.checks.scanner import build_grid
from fglab.core.errors import DomainError
from fglab.core.interval import Domain, GridSpec
from fglab.core.maps import PiecewiseMap, map_image
from fglab.core.report import CheckReport, Witness

BISECTION_STEPS = 50


@dataclass(frozen=True)
class RootScan:
    points: tuple[float, ...]
    residuals: tuple[float, ...]
    whole_domain: bool = False
    grid_size: int = 0
    residual_tol: float = 0.0

    def __iter__(self) -> Iterator[float]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def to_dict(self) -> dict:
        out = {
            "whole_domain": self.whole_domain,
            "grid_size": self.grid_size,
            "residual_tol": self.residual_tol,
        }
        if self.whole_domain:
            out["count"] = len(self.points)
        else:
            out["points"] = [float(p) for p in self.points]
            out["residuals"] = [float(r) for r in self.residuals]
        return out


@dataclass(frozen=True)
class FixedPointScan(RootScan):
    maps: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {"maps": list(self.maps), **super().to_dict()}


def _bisect(h: Callable[[float], float], a: float, b: float, ha: float) -> float:
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (a + b)
        hm = h(mid)
        if hm == 0.0:
            return mid
        if (hm < 0) == (ha < 0):
            a, ha = mid, hm
        else:
            b = mid
    return 0.5 * (a + b)


def _cluster(points: List[float], residuals: List[float], radius: float) -> tuple[list, list]:
    order = sorted(range(len(points)), key=lambda i: points[i])
    reps: list[float] = []
    res: list[float] = []
    group: list[int] = []

    def flush() -> None:
        if group:
            k = min(group, key=lambda i: (residuals[i], points[i]))
            reps.append(points[k])
            res.append(residuals[k])

    for i in order:
        if group and points[i] - points[group[-1]] > radius:
            flush()
            group = []
        group.append(i)
    flush()
    return reps, res


def _scan_roots(
    residual: Callable[[np.ndarray], np.ndarray],
    signed: Sequence[tuple[PiecewiseMap, Callable[[np.ndarray], np.ndarray]]],
    xs: np.ndarray,
    tol: float,
    radius: float,
) -> tuple[list[float], list[float], bool]:
    """Grid hits plus one bisection per same-branch sign change of each signed function."""
    r = residual(xs)
    hits = r <= tol
    if hits.all():
        return [float(x) for x in xs], [float(v) for v in r], True
    points = [float(x) for x in xs[hits]]
    values = [float(v) for v in r[hits]]
    for owners, h in signed:
        hv = h(xs)
        same = np.ones(xs.size - 1, dtype=bool)
        for m in owners:
            idx = m.branch_index(xs)
            same &= idx[:-1] == idx[1:]
        cells = np.flatnonzero(same & (hv[:-1] * hv[1:] < 0))
        for c in cells:
            root = _bisect(lambda x: float(h(np.array([x]))[0]), xs[c], xs[c + 1], hv[c])
            rr = float(residual(np.array([root]))[0])
            if rr <= tol:
                points.append(root)
                values.append(rr)
    reps, res = _cluster(points, values, radius)
    return reps, res, False


def find_common_fixed_points(
    maps: Sequence[PiecewiseMap],
    grid: GridSpec = GridSpec(),
    residual_tol: float = 1e-9,
) -> FixedPointScan:
    """Candidates x with max_m |m(x) - x| <= residual_tol, clustered at grid spacing."""
    if not maps:
        raise ValueError("need at least one map")
    dom = maps[0].domain
    for m in maps[1:]:
        if m.domain != dom:
            raise DomainError(f"maps do not share one domain: '{maps[0].name}' vs '{m.name}'")
    xs = build_grid(maps, grid)

    def residual(pts: np.ndarray) -> np.ndarray:
        return np.max([np.abs(m.evaluate(pts) - pts) for m in maps], axis=0)

    def shifted(m: PiecewiseMap) -> Callable[[np.ndarray], np.ndarray]:
        return lambda pts: m.evaluate(pts) - pts

    signed = [((m,), shifted(m)) for m in maps]
    points, res, whole = _scan_roots(residual, signed, xs, residual_tol, grid.spacing(dom))
    logger.debug("fixed-point scan over {} points: {} candidate(s)", xs.size, len(points))
    return FixedPointScan(
        points=tuple(points),
        residuals=tuple(res),
        whole_domain=whole,
        grid_size=int(xs.size),
        residual_tol=residual_tol,
        maps=tuple(m.name for m in maps),
    )


def find_coincidence_points(
    a: PiecewiseMap,
    b: PiecewiseMap,
    grid: GridSpec = GridSpec(),
    tol: float = 1e-9,
) -> RootScan:
    if a.domain != b.domain:
        raise DomainError(f"maps do not share one domain: '{a.name}' vs '{b.name}'")
    xs = build_grid([a, b], grid)

    def gap(pts: np.ndarray) -> np.ndarray:
        return a.evaluate(pts) - b.evaluate(pts)

    points, res, whole = _scan_roots(
        lambda pts: np.abs(gap(pts)), [((a, b), gap)], xs, tol, grid.spacing(a.domain)
    )
    return RootScan(
        points=tuple(points),
        residuals=tuple(res),
        whole_domain=whole,
        grid_size=int(xs.size),
        residual_tol=tol,
    )


def check_weak_compatibility(
    a: PiecewiseMap,
    b: PiecewiseMap,
    grid: GridSpec = GridSpec(),
    tol: float = 1e-9,
) -> CheckReport:
    """At every coincidence point x, a(b(x)) and b(a(x)) must agree within ``tol``."""
    scan = find_coincidence_points(a, b, grid, tol)
    worst: Optional[Witness] = None
    skipped: list[dict] = []
    checked = 0
    max_gap = 0.0
    for x in scan.points:
        try:
            ab = a(b(x))
            ba = b(a(x))
        except DomainError as err:
            skipped.append({"x": x, "reason": str(err)})
            continue
        checked += 1
        diff = abs(ab - ba)
        max_gap = max(max_gap, diff)
        if diff > tol and (worst is None or diff > worst.margin):
            worst = Witness.of(x, x, diff, 0.0)
    notes = tuple(f"composition left the domain at x = {s['x']!r}" for s in skipped)
    return CheckReport(
        kind="weak_compatibility",
        passed=worst is None,
        witness=worst,
        pairs_checked=checked,
        max_margin=max_gap,
        tol=tol,
        grid={**grid.describe(), "size": scan.grid_size},
        notes=notes,
        details={
            "maps": [a.name, b.name],
            "coincidence": scan.to_dict(),
            "skipped": skipped,
        },
    )


def _missing_point(inner: Domain, outer: Domain, tol: float) -> float:
    for iv in inner:
        if outer.contains_interval(iv, tol):
            continue
        candidates = [iv.lo if iv.lo_closed else None, iv.hi if iv.hi_closed else None]
        for o in outer:
            for e in (o.lo, o.hi):
                if iv.contains(e):
                    candidates.append(e)
        inside = sorted({c for c in candidates if c is not None} | {(iv.lo + iv.hi) / 2.0})
        probes = inside + [(p + q) / 2.0 for p, q in zip(inside, inside[1:])]
        for p in sorted(probes):
            if iv.contains(p) and not outer.contains_with_tol(p, tol) and not outer.contains(p):
                return p
        for p in sorted(probes):
            if iv.contains(p) and not outer.contains(p):
                return p
        return (iv.lo + iv.hi) / 2.0
    return inner.lo


def check_range_inclusion(
    inner: PiecewiseMap,
    outer: PiecewiseMap,
    closure: bool = False,
    tol: float = 1e-12,
) -> CheckReport:
    """inner(X) ⊆ outer(X), or its closure, from exact branch images."""
    img_in = map_image(inner)
    if closure:
        img_in = img_in.closure()
    img_out = map_image(outer)
    passed = img_out.contains_domain(img_in, tol)
    witness = None
    if not passed:
        p = _missing_point(img_in, img_out, tol)
        witness = Witness.of(p, p, img_out.distance(p), 0.0)
    return CheckReport(
        kind="range_inclusion_closure" if closure else "range_inclusion",
        passed=passed,
        witness=witness,
        pairs_checked=len(img_in),
        max_margin=witness.margin if witness else 0.0,
        tol=tol,
        details={
            "inner": inner.name,
            "outer": outer.name,
            "inner_image": str(img_in),
            "outer_image": str(img_out),
        },
    )
