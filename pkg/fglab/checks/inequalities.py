"""Left and right sides of every contractive inequality; all distances are |a - b|."""
from __future__ import annotations

import numpy as np

from fglab.checks.registry import InequalityKind, InequalityTag, Values, register_inequality
from fglab.core.psi import PsiFunction


def _reduced(d: np.ndarray, psi: PsiFunction) -> np.ndarray:
    return d - psi.values(d)


@register_inequality(
    InequalityTag.CONTRACTION,
    roles=("t",),
    uses_psi=False,
    description="d(Tx,Ty) <= k d(x,y)",
)
def contraction(a: Values, b: Values, psi: PsiFunction, kind: InequalityKind):
    return np.abs(a.t - b.t), kind.k * np.abs(a.x - b.x)


@register_inequality(
    InequalityTag.WEAKLY_CONTRACTIVE,
    roles=("t",),
    description="d(Tx,Ty) <= d(x,y) - psi(d(x,y))",
)
def weakly_contractive(a: Values, b: Values, psi: PsiFunction, kind: InequalityKind):
    return np.abs(a.t - b.t), _reduced(np.abs(a.x - b.x), psi)


@register_inequality(
    InequalityTag.WEAKLY_CONTRACTIVE_WRT,
    roles=("t", "f"),
    description="d(Tx,Ty) <= d(fx,fy) - psi(d(fx,fy))",
)
def weakly_contractive_wrt(a: Values, b: Values, psi: PsiFunction, kind: InequalityKind):
    return np.abs(a.t - b.t), _reduced(np.abs(a.f - b.f), psi)


@register_inequality(
    InequalityTag.CROSS,
    roles=("t", "f", "g"),
    description="d(gx,Ty) <= d(fx,fy) - psi(d(fx,fy))",
)
def cross(a: Values, b: Values, psi: PsiFunction, kind: InequalityKind):
    return np.abs(a.g - b.t), _reduced(np.abs(a.f - b.f), psi)


@register_inequality(
    InequalityTag.FAMILY_MIN,
    roles=("t", "f", "g"),
    description="d(T1x,Tjy) <= min{d(fx,gy) - psi(.), d(gx,fy) - psi(.)}",
)
@register_inequality(
    InequalityTag.FG_MIN,
    roles=("t", "f", "g"),
    description="d(Tx,Ty) <= min{d(fx,gy) - psi(.), d(gx,fy) - psi(.)}",
)
def fg_min(a: Values, b: Values, psi: PsiFunction, kind: InequalityKind):
    first = _reduced(np.abs(a.f - b.g), psi)
    second = _reduced(np.abs(a.g - b.f), psi)
    return np.abs(a.t - b.t), np.minimum(first, second)


@register_inequality(
    InequalityTag.FG_MAX,
    roles=("t", "f", "g"),
    description="d(Tx,Ty) <= max{d(fx,gy) - psi(.), d(gx,fy) - psi(.)}",
)
def fg_max(a: Values, b: Values, psi: PsiFunction, kind: InequalityKind):
    first = _reduced(np.abs(a.f - b.g), psi)
    second = _reduced(np.abs(a.g - b.f), psi)
    return np.abs(a.t - b.t), np.maximum(first, second)
