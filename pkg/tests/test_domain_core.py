from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fglab.core.errors import DomainError, NoPreimage
from fglab.core.interval import Domain, GridSpec, Interval, sample_grid
from fglab.core.maps import (
    Affine,
    Branch,
    Constant,
    LinearFractional,
    PiecewiseMap,
    Power,
    invert_map,
    is_continuous,
    map_image,
)
from fglab.core.numbers import parse_real


def two_piece_t() -> PiecewiseMap:
    """1/2 on (1/4, 2/3), 1 - x/2 on [2/3, 1]."""
    return PiecewiseMap(
        "T",
        (
            Branch(Interval(0.25, 2 / 3, False, False), Constant(0.5)),
            Branch(Interval.closed(2 / 3, 1.0), Affine(-0.5, 1.0)),
        ),
    )


def test_parse_real_accepts_rationals_and_numbers():
    assert parse_real("2/3") == 2 / 3
    assert parse_real(" -1/2 ") == -0.5
    assert parse_real("0.25") == 0.25
    assert parse_real(3) == 3.0


@pytest.mark.parametrize("bad", ["", "abc", "1/0", True])
def test_parse_real_rejects_garbage(bad):
    with pytest.raises(ValueError):
        parse_real(bad)


def test_interval_validation():
    with pytest.raises(DomainError):
        Interval(1.0, 0.0)
    with pytest.raises(DomainError):
        Interval(0.0, 0.0, False, True)
    with pytest.raises(DomainError):
        Interval(0.0, math.inf)


def test_domain_merges_touching_closed_intervals():
    d = Domain.of(Interval.closed(1, 2), Interval.closed(0, 1))
    assert len(d) == 1
    assert (d.lo, d.hi) == (0, 2)


def test_domain_keeps_gap_at_doubly_open_point():
    d = Domain.of(Interval(0, 1, True, False), Interval(1, 2, False, True))
    assert len(d) == 2
    assert not d.contains(1.0)
    assert d.contains(0.999)


def test_sample_grid_stays_inside_open_ends():
    d = Domain.of(Interval(0.0, 1.0, False, True))
    xs = sample_grid(d, GridSpec(points_per_interval=11))
    assert xs.min() > 0.0
    assert xs.max() == 1.0
    assert np.all(np.diff(xs) > 0)


def test_sample_grid_of_a_point_is_the_point():
    d = Domain.of(Interval.point(0.5))
    assert sample_grid(d, GridSpec(points_per_interval=11)).tolist() == [0.5]


def test_sample_grid_merges_extra_points_that_are_members():
    d = Domain.of(Interval.closed(0.0, 1.0))
    xs = sample_grid(d, GridSpec(points_per_interval=3, extra_points=(0.3, 5.0)))
    assert list(xs) == [0.0, 0.3, 0.5, 1.0]


def test_overlapping_branches_are_rejected():
    with pytest.raises(DomainError):
        PiecewiseMap(
            "bad",
            (
                Branch(Interval.closed(0, 0.6), Affine(1.0)),
                Branch(Interval.closed(0.5, 1), Affine(2.0)),
            ),
        )


def test_branch_constructors_reject_degenerate_parameters():
    with pytest.raises(DomainError):
        Affine(0.0, 1.0)
    with pytest.raises(DomainError):
        LinearFractional(1, 1, 1, 1)
    with pytest.raises(DomainError):
        Branch(Interval.closed(-2, 0), LinearFractional(1, 0, 1, 1))
    with pytest.raises(DomainError):
        Branch(Interval.closed(-1, 1), Power(1.0, 2.0))


def test_scalar_and_vector_evaluation_agree():
    t = two_piece_t()
    xs = np.linspace(0.3, 1.0, 57)
    assert np.allclose(t.evaluate(xs), [t(float(x)) for x in xs])
    with pytest.raises(DomainError):
        t(0.25)
    with pytest.raises(DomainError):
        t.evaluate(np.array([0.5, 0.1]))


def test_linear_fractional_and_power_branches():
    dom = Domain.of(Interval.closed(0, 2))
    frac = PiecewiseMap("frac", (Branch(dom.intervals[0], LinearFractional(1, 0, 1, 1)),))
    sq = PiecewiseMap("sq", (Branch(dom.intervals[0], Power(1.0, 2.0)),))
    assert frac(1.0) == 0.5
    assert sq(1.5) == 2.25
    assert invert_map(frac, 0.5, anchor=0.0) == pytest.approx(1.0)
    assert invert_map(sq, 2.25, anchor=0.0) == pytest.approx(1.5)


def test_invert_map_picks_preimage_nearest_anchor():
    t = two_piece_t()
    assert invert_map(t, 0.5, anchor=0.9) == 1.0
    # constant branch: the anchor itself is a preimage
    assert invert_map(t, 0.5, anchor=0.4) == 0.4


def test_invert_map_through_an_affine_branch():
    f = PiecewiseMap(
        "f",
        (
            Branch(Interval(0.25, 2 / 3, False, False), Constant(1.0)),
            Branch(Interval.closed(2 / 3, 1.0), Affine(-1.0, 4 / 3)),
        ),
    )
    assert invert_map(f, 0.55, anchor=0.9) == pytest.approx(47 / 60)
    assert invert_map(f, 1.0, anchor=0.5) == 0.5
    with pytest.raises(NoPreimage):
        invert_map(f, 0.1, anchor=0.9)


def test_invert_map_raises_without_preimage():
    with pytest.raises(NoPreimage) as info:
        invert_map(two_piece_t(), 0.9, anchor=0.9)
    assert info.value.map_name == "T"
    assert info.value.y == 0.9


def test_map_image_is_union_of_branch_images():
    img = map_image(two_piece_t())
    assert img.contains(0.5)
    assert img.contains(0.6)
    assert img.contains(2 / 3)
    assert not img.contains(0.7)


def test_continuity_reports_jump_at_junction():
    rep = is_continuous(two_piece_t())
    assert not rep.passed
    assert rep.witness.x == 2 / 3
    assert rep.witness.lhs == pytest.approx(1 / 6)

    smooth = PiecewiseMap(
        "s",
        (
            Branch(Interval(0, 0.5, True, False), Affine(1.0)),
            Branch(Interval.closed(0.5, 1), Constant(0.5)),
        ),
    )
    assert is_continuous(smooth).passed


@settings(max_examples=60, deadline=None)
@given(
    slope=st.one_of(st.floats(0.1, 5.0), st.floats(-5.0, -0.1)),
    intercept=st.floats(-5.0, 5.0),
    x=st.floats(0.0, 1.0),
)
def test_affine_inversion_recovers_the_point(slope, intercept, x):
    m = PiecewiseMap("a", (Branch(Interval.closed(0, 1), Affine(slope, intercept)),))
    assert invert_map(m, m(x), anchor=0.0) == pytest.approx(x, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(x=st.floats(-3.0, 3.0), y=st.floats(-3.0, 3.0))
def test_domain_distance_is_one_lipschitz(x, y):
    d = Domain.of(Interval.closed(-1, -0.5), Interval(0.5, 1, False, True))
    assert abs(d.distance(x) - d.distance(y)) <= abs(x - y) + 1e-12
