"""
Tests for exact piecewise-linear functions and range queries
"""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.core.errors import MalformedPiecewise, OutOfDomain
from src.core.piecewise import PiecewiseLinear, RangeExtremum, format_rational, to_rational

F = Fraction


@pytest.fixture
def tent():
    return PiecewiseLinear.from_points([(0, 0), ("1/2", "1/2"), (1, 0)])


def test_to_rational_parses_fractions_and_decimals():
    assert to_rational("13/80") == F(13, 80)
    assert to_rational("0.1625") == F(13, 80)
    assert to_rational(" 3 ") == 3


def test_to_rational_rejects_garbage():
    with pytest.raises(MalformedPiecewise):
        to_rational("one/third")
    with pytest.raises(MalformedPiecewise):
        to_rational("1/0")


def test_format_rational():
    assert format_rational(F(13, 80)) == "13/80"
    assert format_rational(F(4, 2)) == "2"


def test_constructor_validation():
    with pytest.raises(MalformedPiecewise):
        PiecewiseLinear.from_points([(0, 0)])
    with pytest.raises(MalformedPiecewise):
        PiecewiseLinear.from_points([(0, 0), ("1/2", 0), ("1/2", 1), (1, 1)])
    with pytest.raises(MalformedPiecewise):
        PiecewiseLinear.from_points([("1/10", 0), (1, 1)])


def test_evaluation_and_slopes(tent):
    assert tent(F(1, 4)) == F(1, 4)
    assert tent(F(3, 4)) == F(1, 4)
    assert tent(1) == 0
    assert tent.slopes == (1, -1)
    assert tent.slope_right(F(1, 2)) == -1
    assert tent.slope_left(F(1, 2)) == 1
    with pytest.raises(OutOfDomain):
        tent(F(3, 2))


def test_algebra_is_exact(tent):
    doubled = tent + tent
    assert doubled(F(1, 3)) == F(2, 3)
    assert (tent - tent).ys == (0, 0)
    assert tent.scaled(F(1, 2))(F(1, 2)) == F(1, 4)
    assert tent.sup_distance(PiecewiseLinear.constant(0)) == F(1, 2)


def test_refine_then_simplify_restores_breakpoints(tent):
    refined = tent.refine([F(1, 8), F(5, 8)])
    assert len(refined.xs) == 5
    assert refined.simplified() == tent


def test_monotone_inverses():
    ramp = PiecewiseLinear.from_points([(0, 0), ("1/4", "1/4"), ("3/4", "1/4"), (1, 1)])
    assert ramp.is_nondecreasing()
    assert ramp.first_at_least(F(1, 4)) == F(1, 4)
    assert ramp.last_at_most(F(1, 4)) == F(3, 4)
    assert ramp.first_at_least(F(1, 8)) == F(1, 8)
    assert ramp.last_at_most(2) == 1
    assert ramp.first_at_least(-1) == 0


def test_preimages_include_flat_runs(tent):
    assert tent.preimages([F(1, 4)]) == [F(1, 4), F(3, 4)]
    flat = PiecewiseLinear.from_points([(0, 0), ("1/3", "1/3"), ("2/3", "1/3"), (1, 0)])
    assert flat.preimages([F(1, 3)]) == [F(1, 3), F(2, 3)]


def test_range_extremum_prefers_smallest_index():
    values = [F(3), F(1), F(2), F(1), F(5)]
    mins = RangeExtremum(values, "min")
    maxs = RangeExtremum(values, "max")
    assert mins.query(0, 4) == 1
    assert mins.query(2, 4) == 3
    assert maxs.query(0, 3) == 0
    assert mins.query(3, 2) is None


def test_first_below():
    table = RangeExtremum([F(5), F(4), F(3), F(4), F(0)], "min")
    assert table.first_below(0, F(4)) == 2
    assert table.first_below(3, F(4)) == 4
    assert table.first_below(0, F(0)) is None
    assert table.first_below(9, F(1)) is None


@given(st.lists(st.integers(min_value=-20, max_value=20), min_size=1, max_size=40),
       st.data())
def test_range_extremum_matches_linear_scan(raw, data):
    values = [F(v) for v in raw]
    lo = data.draw(st.integers(min_value=0, max_value=len(values) - 1))
    hi = data.draw(st.integers(min_value=lo, max_value=len(values) - 1))
    window = values[lo:hi + 1]
    mins = RangeExtremum(values, "min")
    assert mins.query(lo, hi) == lo + window.index(min(window))
    maxs = RangeExtremum(values, "max")
    assert maxs.query(lo, hi) == lo + window.index(max(window))
