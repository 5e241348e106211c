from __future__ import annotations

import math

import pytest

from fglab.checks import (
    check_range_inclusion,
    check_weak_compatibility,
    find_coincidence_points,
    find_common_fixed_points,
)
from fglab.core.errors import DomainError
from fglab.core.interval import Domain, GridSpec, Interval
from fglab.core.maps import Affine, Branch, Constant, PiecewiseMap, Power

UNIT = Interval.closed(0, 1)
GRID = GridSpec(points_per_interval=201)
GOLDEN = (math.sqrt(5) - 1) / 2


def on_unit(name: str, fn) -> PiecewiseMap:
    return PiecewiseMap(name, (Branch(UNIT, fn),))


def example_maps() -> tuple[PiecewiseMap, PiecewiseMap, PiecewiseMap]:
    low = Interval(0.25, 2 / 3, False, False)
    high = Interval.closed(2 / 3, 1)
    t = PiecewiseMap("T", (Branch(low, Constant(0.5)), Branch(high, Affine(-0.5, 1.0))))
    f = PiecewiseMap("f", (Branch(low, Constant(1.0)), Branch(high, Affine(-1.0, 4 / 3))))
    g = PiecewiseMap("g", (Branch(low, Constant(1 / 3)), Branch(high, Affine(-1.0, 4 / 3))))
    return t, f, g


def test_single_fixed_point_of_a_contraction():
    scan = find_common_fixed_points([on_unit("T", Affine(0.5))], GRID)
    assert list(scan) == [0.0]
    assert not scan.whole_domain
    assert scan.maps == ("T",)


def test_common_fixed_point_of_three_piecewise_maps():
    scan = find_common_fixed_points(list(example_maps()), GRID)
    assert len(scan) == 1
    assert scan.points[0] == pytest.approx(2 / 3, abs=1e-9)


def test_fixed_point_between_grid_points_is_bisected():
    # 1 - x has its fixed point at 1/2; 0.3 + 0.4x at 1/2 too, off a 10-point grid
    scan = find_common_fixed_points(
        [on_unit("a", Affine(-1.0, 1.0)), on_unit("b", Affine(0.4, 0.3))],
        GridSpec(points_per_interval=10),
    )
    assert scan.points == pytest.approx((0.5,), abs=1e-9)


def test_identity_fixes_every_point():
    d = Domain.of(UNIT)
    scan = find_common_fixed_points([PiecewiseMap.identity(d)], GridSpec(points_per_interval=11))
    assert scan.whole_domain
    assert scan.to_dict()["count"] == 11


def test_fixed_point_scan_validation():
    with pytest.raises(ValueError):
        find_common_fixed_points([])
    other = PiecewiseMap("o", (Branch(Interval.closed(0, 2), Affine(0.5)),))
    with pytest.raises(DomainError):
        find_common_fixed_points([on_unit("T", Affine(0.5)), other])


def test_coincidence_point_of_crossing_lines():
    f = on_unit("f", Affine(1.0))
    g = on_unit("g", Affine(-1.0, 1.0))
    scan = find_coincidence_points(f, g, GRID)
    assert scan.points == pytest.approx((0.5,))


def test_weak_compatibility_holds_where_maps_commute():
    t, f, g = example_maps()
    assert check_weak_compatibility(t, f, GRID).passed
    assert check_weak_compatibility(t, g, GRID).passed


def test_weak_compatibility_fails_when_compositions_differ():
    # 1 - x and x^2 meet at the golden section point, where they do not commute
    a = on_unit("a", Affine(-1.0, 1.0))
    b = on_unit("b", Power(1.0, 2.0))
    rep = check_weak_compatibility(a, b, GRID)
    assert not rep.passed
    assert rep.witness.x == pytest.approx(GOLDEN, abs=1e-9)
    assert rep.witness.lhs == pytest.approx(GOLDEN - GOLDEN**4, abs=1e-9)


def test_range_inclusion_from_exact_images():
    half = on_unit("half", Affine(0.5))
    ident = PiecewiseMap.identity(Domain.of(UNIT))
    assert check_range_inclusion(half, ident).passed
    rep = check_range_inclusion(ident, half)
    assert not rep.passed
    assert 0.5 < rep.witness.x <= 1.0
    assert rep.details["outer_image"] == "[0.0, 0.5]"


def test_closure_form_catches_an_open_end():
    # inner image is [0, 1/2) whose closure adds 1/2; outer image is [0, 1/2)
    open_half = PiecewiseMap("in", (Branch(Interval(0, 1, True, False), Affine(0.5)),))
    rep_plain = check_range_inclusion(open_half, open_half)
    rep_closure = check_range_inclusion(open_half, open_half, closure=True)
    assert rep_plain.passed
    assert not rep_closure.passed
    assert rep_closure.witness.x == 0.5
    assert rep_closure.kind == "range_inclusion_closure"
