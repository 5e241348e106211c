from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fglab.checks import (
    InequalityKind,
    InequalityTag,
    MapBundle,
    check_family,
    check_inequality,
    evaluate_pairs,
    list_tags,
)
from fglab.core.errors import DomainError
from fglab.core.interval import Domain, GridSpec, Interval
from fglab.core.maps import Affine, Branch, LinearFractional, PiecewiseMap, eval_map
from fglab.core.psi import PsiFunction, eval_psi

UNIT = Domain.of(Interval.closed(0, 1))
GRID = GridSpec(points_per_interval=51)


def affine(name: str, slope: float, intercept: float = 0.0, dom: Domain = UNIT) -> PiecewiseMap:
    return PiecewiseMap(name, tuple(Branch(iv, Affine(slope, intercept)) for iv in dom))


def half() -> PiecewiseMap:
    return affine("T", 0.5)


def ident() -> PiecewiseMap:
    return PiecewiseMap.identity(UNIT)


def test_every_tag_is_registered():
    assert set(list_tags()) == {t.value for t in InequalityTag}


def test_contraction_holds_at_its_constant():
    kind = InequalityKind(InequalityTag.CONTRACTION, k=0.5)
    rep = check_inequality(kind, MapBundle(half()), PsiFunction.half_linear(), GRID)
    assert rep.passed
    assert rep.witness is None
    assert rep.pairs_checked == 51 * 51


def test_contraction_below_constant_fails_at_widest_pair():
    kind = InequalityKind(InequalityTag.CONTRACTION, k=0.4)
    rep = check_inequality(kind, MapBundle(half()), PsiFunction.half_linear(), GRID)
    assert not rep.passed
    w = rep.witness
    assert (w.x, w.y) == (0.0, 1.0)
    assert (w.lhs, w.rhs) == pytest.approx((0.5, 0.4))
    assert rep.max_margin == pytest.approx(0.1)
    assert rep.kind == "contraction(k=0.4)"


def test_contraction_constant_must_be_below_one():
    with pytest.raises(ValueError):
        InequalityKind(InequalityTag.CONTRACTION, k=1.0)
    with pytest.raises(ValueError):
        InequalityKind(InequalityTag.CONTRACTION)


def test_weakly_contractive_with_linear_psi():
    psi = PsiFunction.half_linear()
    kind = InequalityKind(InequalityTag.WEAKLY_CONTRACTIVE)
    assert check_inequality(kind, MapBundle(half()), psi, GRID).passed
    assert not check_inequality(kind, MapBundle(ident()), psi, GRID).passed


@settings(max_examples=40, deadline=None)
@given(
    slope=st.floats(0.01, 0.95) | st.floats(-0.95, -0.01),
    intercept=st.floats(-1.0, 1.0),
)
def test_contraction_implies_weak_contraction_with_matching_psi(slope, intercept):
    # k-contraction is weakly contractive for psi(t) = (1 - k) t
    t = affine("T", slope, intercept)
    k = min(abs(slope) + 0.01, 0.99)
    psi = PsiFunction.linear(1.0 - k)
    contraction = InequalityKind(InequalityTag.CONTRACTION, k=k)
    assert check_inequality(contraction, MapBundle(t), psi, GRID).passed
    assert check_inequality(
        InequalityKind(InequalityTag.WEAKLY_CONTRACTIVE), MapBundle(t), psi, GRID, tol=1e-9
    ).passed


def test_x_over_one_plus_x_is_weakly_but_not_strictly_contractive():
    dom = Domain.of(Interval.closed(0, 10))
    t = PiecewiseMap("T", (Branch(dom.intervals[0], LinearFractional(1, 0, 1, 1)),))
    psi = PsiFunction.power_ratio()
    grid = GridSpec(points_per_interval=101)
    assert check_inequality(
        InequalityKind(InequalityTag.WEAKLY_CONTRACTIVE), MapBundle(t), psi, grid, tol=1e-9
    ).passed
    rep = check_inequality(
        InequalityKind(InequalityTag.CONTRACTION, k=0.9), MapBundle(t), psi, grid
    )
    assert not rep.passed
    assert rep.witness.x == 0.0


def test_fg_min_and_fg_max_with_identity_pair():
    bundle = MapBundle(half(), ident(), ident())
    psi = PsiFunction.half_linear()
    assert check_inequality(InequalityKind(InequalityTag.FG_MIN), bundle, psi, GRID).passed
    assert check_inequality(InequalityKind(InequalityTag.FG_MAX), bundle, psi, GRID).passed


def test_fg_min_is_symmetric_in_f_and_g():
    f = affine("f", 0.9)
    g = affine("g", -0.8, 1.0)
    t = affine("T", 0.2, 0.3)
    psi = PsiFunction.power_ratio()
    kind = InequalityKind(InequalityTag.FG_MIN)
    a = check_inequality(kind, MapBundle(t, f, g), psi, GRID)
    b = check_inequality(kind, MapBundle(t, g, f), psi, GRID)
    assert a.passed == b.passed
    assert a.max_margin == pytest.approx(b.max_margin)


def test_cross_form_fails_on_the_diagonal_and_the_listed_pair_reports_it():
    bundle = MapBundle(half(), ident(), ident())
    rep = check_inequality(
        InequalityKind(InequalityTag.CROSS),
        bundle,
        PsiFunction.half_linear(),
        GRID,
        probes=[(1.0, 1.0), (0.0, 0.0)],
    )
    assert not rep.passed
    hit = rep.probe_at(1.0, 1.0)
    assert hit.violated
    assert (hit.lhs, hit.rhs) == (0.5, 0.0)
    assert not rep.probe_at(0.0, 0.0).violated
    assert rep.probe_at(0.5, 0.5) is None


def test_evaluate_pairs_matches_scan_values():
    bundle = MapBundle(half(), ident(), ident())
    kind = InequalityKind(InequalityTag.FG_MIN)
    (p,) = evaluate_pairs(kind, bundle, PsiFunction.half_linear(), [(0.2, 0.8)])
    assert p.lhs == pytest.approx(0.3)
    assert p.rhs == pytest.approx(0.3)
    assert not p.violated


def test_missing_role_and_bad_tolerance():
    psi = PsiFunction.half_linear()
    with pytest.raises(ValueError):
        check_inequality(InequalityKind(InequalityTag.FG_MIN), MapBundle(half()), psi, GRID)
    with pytest.raises(ValueError):
        kind = InequalityKind(InequalityTag.WEAKLY_CONTRACTIVE)
        check_inequality(kind, MapBundle(half()), psi, GRID, tol=0.0)


def test_bundle_rejects_maps_on_different_domains():
    other = affine("f", 1.0, dom=Domain.of(Interval.closed(0, 2)))
    with pytest.raises(DomainError):
        MapBundle(half(), other, other)


def test_family_check_records_the_failing_member():
    psi = PsiFunction.half_linear()
    assert check_family([half(), half()], ident(), ident(), psi, GRID).passed
    rep = check_family([half(), ident()], ident(), ident(), psi, GRID)
    assert not rep.passed
    assert rep.witness.member == 1
    assert (rep.witness.x, rep.witness.y) == (0.0, 1.0)
    assert rep.pairs_checked == 2 * 51 * 51


def test_family_flags_a_later_member_just_past_the_tolerance():
    # member 0 tops out at 0.05, member 1 at 0.13: within tol of each other, but only 1 violates
    ts = [affine("T1", 0.55), affine("T2", 0.55, 0.08)]
    rep = check_family(ts, ident(), ident(), PsiFunction.half_linear(), GRID, tol=0.1)
    assert not rep.passed
    assert rep.max_margin == pytest.approx(0.13)
    assert rep.witness.member == 1
    assert rep.witness.margin > 0.1


def test_family_of_one_has_no_member_index():
    rep = check_family([ident()], ident(), ident(), PsiFunction.power_ratio(), GRID)
    assert not rep.passed
    assert rep.witness.member is None


@st.composite
def two_branch_maps(draw, name: str) -> PiecewiseMap:
    cut = draw(st.floats(0.2, 0.8))
    slopes = st.floats(0.1, 2.0) | st.floats(-2.0, -0.1)
    return PiecewiseMap(
        name,
        (
            Branch(Interval(0.0, cut, True, False), Affine(draw(slopes), draw(st.floats(-1, 1)))),
            Branch(Interval.closed(cut, 1.0), Affine(draw(slopes), draw(st.floats(-1, 1)))),
        ),
    )


def sides_at(tag: InequalityTag, k: float, bundle: MapBundle, psi, x: float, y: float):
    """Both sides at (x, y), straight from scalar map evaluation."""
    def t(v):
        return eval_map(bundle.t, v)

    def f(v):
        return eval_map(bundle.f, v)

    def g(v):
        return eval_map(bundle.g, v)

    def reduced(d):
        return d - eval_psi(psi, d)

    if tag is InequalityTag.CONTRACTION:
        return abs(t(x) - t(y)), k * abs(x - y)
    if tag is InequalityTag.WEAKLY_CONTRACTIVE:
        return abs(t(x) - t(y)), reduced(abs(x - y))
    if tag is InequalityTag.WEAKLY_CONTRACTIVE_WRT:
        return abs(t(x) - t(y)), reduced(abs(f(x) - f(y)))
    if tag is InequalityTag.CROSS:
        return abs(g(x) - t(y)), reduced(abs(f(x) - f(y)))
    pick = max if tag is InequalityTag.FG_MAX else min
    return abs(t(x) - t(y)), pick(reduced(abs(f(x) - g(y))), reduced(abs(g(x) - f(y))))


@pytest.mark.parametrize("tag", list(InequalityTag), ids=lambda t: t.value)
@settings(max_examples=25, deadline=None)
@given(t=two_branch_maps("T"), f=two_branch_maps("f"), g=two_branch_maps("g"))
def test_reported_witness_violates_when_re_evaluated(tag, t, f, g):
    k = 0.5
    kind = InequalityKind(tag, k=k) if tag is InequalityTag.CONTRACTION else InequalityKind(tag)
    bundle = MapBundle(t, f, g)
    psi = PsiFunction.half_linear()
    tol = 1e-9
    rep = check_inequality(kind, bundle, psi, GridSpec(points_per_interval=21), tol)
    if rep.passed:
        assert rep.witness is None
        assert rep.max_margin <= tol
        return
    w = rep.witness
    lhs, rhs = sides_at(tag, k, bundle, psi, w.x, w.y)
    assert lhs == pytest.approx(w.lhs, abs=1e-12)
    assert rhs == pytest.approx(w.rhs, abs=1e-12)
    assert lhs > rhs + tol
    assert w.margin == pytest.approx(rep.max_margin, abs=tol)
