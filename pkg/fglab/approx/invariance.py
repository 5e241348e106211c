from __future__ import annotations

from typing import Union

import numpy as np
from loguru import logger

from fglab.approx.sets import BestApproxResult, CompactSet
from fglab.checks.scanner import build_grid
from fglab.core.errors import EmptySetError
from fglab.core.interval import GridSpec, sample_grid
from fglab.core.maps import PiecewiseMap
from fglab.core.report import CheckReport, Witness

SetLike = Union[CompactSet, BestApproxResult]


def _first_worst(values: np.ndarray, tol: float) -> int:
    top = float(np.max(values))
    return int(np.flatnonzero(values >= top - tol)[0])


def _points_invariance(m: PiecewiseMap, s: BestApproxResult, tol: float) -> CheckReport:
    targets = np.asarray(s.points, dtype=float)
    worst = None
    max_gap = 0.0
    for p in s.points:
        v = m(p)
        gap = float(np.min(np.abs(targets - v)))
        max_gap = max(max_gap, gap)
        if gap > tol and (worst is None or gap > worst.lhs):
            worst = Witness.of(p, v, gap, 0.0)
    return CheckReport(
        kind="invariance",
        passed=worst is None,
        witness=worst,
        pairs_checked=len(s.points),
        max_margin=max_gap,
        tol=tol,
        details={"map": m.name, "set": [float(p) for p in s.points]},
    )


def check_invariance(
    m: PiecewiseMap,
    s: SetLike,
    grid: GridSpec = GridSpec(),
    tol: float = 1e-12,
) -> CheckReport:
    """m(s) ⊆ s.

    A compact set is sampled (plus the map's breakpoints inside it); a finite point
    set is checked point by point. The witness is the sample whose image lies
    farthest from ``s``.
    """
    if isinstance(s, BestApproxResult):
        if not s.points:
            raise EmptySetError("invariance of an empty point set")
        return _points_invariance(m, s, tol)
    if s.is_empty:
        raise EmptySetError("invariance of an empty set")
    xs = np.concatenate([sample_grid(s.domain, grid), m.breakpoints(grid)])
    xs = np.unique(xs[s.domain.contains_array(xs)])
    images = m.evaluate(xs)
    gaps = s.domain.distance_array(images)
    max_gap = float(np.max(gaps))
    witness = None
    if max_gap > tol:
        i = _first_worst(gaps, tol)
        witness = Witness.of(xs[i], images[i], gaps[i], 0.0)
    logger.debug("invariance of {} under {}: max gap {!r}", s, m.name, max_gap)
    return CheckReport(
        kind="invariance",
        passed=witness is None,
        witness=witness,
        pairs_checked=int(xs.size),
        max_margin=max_gap,
        tol=tol,
        grid={**grid.describe(), "size": int(xs.size)},
        details={"map": m.name, "set": str(s)},
    )


def check_strict_gap(
    t: PiecewiseMap,
    f: PiecewiseMap,
    g: PiecewiseMap,
    pm: BestApproxResult,
    grid: GridSpec = GridSpec(),
    margin: float = 1e-12,
) -> CheckReport:
    """d(x, Ta) < d(x, fa) and d(x, Ta) < d(x, ga) for every a in ``pm`` and grid x.

    Strictness means a gap larger than ``margin``. The witness is (x, a) with the
    largest d(x, Ta) - min(d(x, fa), d(x, ga)); lhs is d(x, Ta).
    """
    if not pm.points:
        raise EmptySetError("strict gap check on an empty best-approximation set")
    xs = build_grid([t, f, g], grid)
    worst = None
    top = -np.inf
    for a in pm.points:
        ta, fa, ga = t(a), f(a), g(a)
        d_t = np.abs(xs - ta)
        d_fg = np.minimum(np.abs(xs - fa), np.abs(xs - ga))
        diff = d_t - d_fg
        local = float(np.max(diff))
        top = max(top, local)
        if local > -margin and (worst is None or local > worst.margin + margin):
            i = _first_worst(diff, margin)
            worst = Witness.of(xs[i], a, d_t[i], d_fg[i])
    return CheckReport(
        kind="strict_gap",
        passed=worst is None,
        witness=worst,
        pairs_checked=int(xs.size) * len(pm.points),
        max_margin=float(top),
        tol=margin,
        grid={**grid.describe(), "size": int(xs.size)},
        details={"maps": [t.name, f.name, g.name], "points": [float(p) for p in pm.points]},
    )
