"""Grid-pair scans of contractive inequalities."""
from __future__ import annotations

from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from fglab.checks.registry import InequalityKind, InequalityTag, MapBundle, get_entry
from fglab.core.interval import GridSpec, sample_grid
from fglab.core.maps import PiecewiseMap
from fglab.core.psi import PsiFunction
from fglab.core.report import CheckReport, PairEvaluation, Witness

Pair = Tuple[float, float]


def build_grid(maps: Iterable[PiecewiseMap], grid: GridSpec) -> np.ndarray:
    """Domain sample plus the branch breakpoints of every map."""
    maps = list(maps)
    dom = maps[0].domain
    chunks = [sample_grid(dom, grid)]
    chunks.extend(m.breakpoints(grid) for m in maps)
    xs = np.concatenate(chunks)
    return np.unique(xs[dom.contains_array(xs)])


def _argmax_first(margin: np.ndarray, tol: float) -> int:
    """Flat index of the first violating entry within ``tol`` of the maximum (row-major)."""
    flat = margin.ravel()
    top = float(np.max(flat))
    return int(np.flatnonzero((flat >= top - tol) & (flat > tol))[0])


def evaluate_pairs(
    kind: InequalityKind,
    bundle: MapBundle,
    psi: PsiFunction,
    pairs: Sequence[Pair],
    tol: float = 1e-12,
    t_right: Optional[PiecewiseMap] = None,
) -> tuple[PairEvaluation, ...]:
    """Evaluate the inequality at given pairs with scalar map evaluation."""
    if not pairs:
        return ()
    entry = get_entry(kind.tag)
    xs = np.array([p[0] for p in pairs], dtype=float)
    ys = np.array([p[1] for p in pairs], dtype=float)
    left = bundle.side_pointwise(xs)
    right = bundle.side_pointwise(ys, t=t_right)
    lhs, rhs = entry.evaluator(left, right, psi, kind)
    return tuple(
        PairEvaluation(
            x=float(x),
            y=float(y),
            lhs=float(a),
            rhs=float(b),
            margin=float(a - b),
            violated=bool(a - b > tol),
        )
        for x, y, a, b in zip(xs, ys, lhs, rhs)
    )


def _scan(
    kind: InequalityKind,
    bundle: MapBundle,
    psi: PsiFunction,
    xs: np.ndarray,
    t_right: Optional[PiecewiseMap] = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    entry = get_entry(kind.tag)
    left = bundle.side(xs).column()
    right = bundle.side(xs, t=t_right).row()
    lhs, rhs = entry.evaluator(left, right, psi, kind)
    lhs, rhs = np.broadcast_arrays(lhs, rhs)
    return lhs, rhs, lhs - rhs


def check_inequality(
    kind: InequalityKind,
    bundle: MapBundle,
    psi: PsiFunction,
    grid: GridSpec = GridSpec(),
    tol: float = 1e-12,
    probes: Sequence[Pair] = (),
) -> CheckReport:
    """Scan every ordered grid pair; the witness is the maximum-margin pair.

    Ties within ``tol`` of the maximum go to the lexicographically smallest (x, y).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    entry = get_entry(kind.tag)
    bundle.require(entry.roles)
    xs = build_grid(bundle.maps(), grid)
    lhs, rhs, margin = _scan(kind, bundle, psi, xs)
    n = xs.size
    max_margin = float(np.max(margin))
    witness = None
    if max_margin > tol:
        i, j = divmod(_argmax_first(margin, tol), n)
        witness = Witness.of(xs[i], xs[j], lhs[i, j], rhs[i, j])
    logger.debug("{}: {} pairs, max margin {!r}", kind.label, n * n, max_margin)
    return CheckReport(
        kind=kind.label,
        passed=witness is None,
        witness=witness,
        pairs_checked=n * n,
        max_margin=max_margin,
        tol=tol,
        grid={**grid.describe(), "size": n},
        probes=evaluate_pairs(kind, bundle, psi, probes, tol),
        details={"psi": psi.describe()} if entry.uses_psi else {},
    )


def check_family(
    ts: Sequence[PiecewiseMap],
    f: PiecewiseMap,
    g: PiecewiseMap,
    psi: PsiFunction,
    grid: GridSpec = GridSpec(),
    tol: float = 1e-12,
    probes: Sequence[Pair] = (),
) -> CheckReport:
    """d(T1 x, Tj y) <= min{...} for every member j; the witness records j."""
    if not ts:
        raise ValueError("family must not be empty")
    kind = InequalityKind(InequalityTag.FAMILY_MIN)
    bundle = MapBundle(ts[0], f, g)
    for tj in ts[1:]:
        MapBundle(tj, f, g)
    xs = build_grid([*ts, f, g], grid)
    n = xs.size
    best: Optional[Witness] = None
    max_margin = -np.inf
    all_probes: list[PairEvaluation] = []
    for j, tj in enumerate(ts):
        lhs, rhs, margin = _scan(kind, bundle, psi, xs, t_right=tj)
        top = float(np.max(margin))
        max_margin = max(max_margin, top)
        # an earlier member keeps the witness unless this one is worse by more than tol
        if top > tol and (best is None or top > best.margin + tol):
            i, k = divmod(_argmax_first(margin, tol), n)
            member = j if len(ts) > 1 else None
            best = Witness.of(xs[i], xs[k], lhs[i, k], rhs[i, k], member)
        all_probes.extend(evaluate_pairs(kind, bundle, psi, probes, tol, t_right=tj))
    return CheckReport(
        kind=kind.label,
        passed=best is None,
        witness=best,
        pairs_checked=n * n * len(ts),
        max_margin=float(max_margin),
        tol=tol,
        grid={**grid.describe(), "size": n},
        probes=tuple(all_probes),
        details={"psi": psi.describe(), "members": [t.name for t in ts]},
    )
