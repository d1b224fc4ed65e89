"""
Tests for diagonal validation, delta-hat and interval queries
"""

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from src.core.diagonal import (
    chordal_diagonal,
    delta_hat,
    diagonal_from_hat,
    extremum_on_interval,
    ordinal_points,
    total_variation,
    validate_diagonal,
    zigzag_perturb,
)
from src.core.errors import (
    DiagonalValidationError,
    EndpointMismatch,
    NoSlopeOneSegment,
    SlopeOutOfRange,
    ViolatesBound,
)
from src.core.piecewise import PiecewiseLinear

from tests.strategies import generic_diagonals

F = Fraction


def test_validation_errors():
    with pytest.raises(EndpointMismatch):
        validate_diagonal(PiecewiseLinear.from_points([(0, 0), (1, "1/2")]))
    with pytest.raises(ViolatesBound):
        validate_diagonal(PiecewiseLinear.from_points([(0, 0), ("1/2", "3/4"), (1, 1)]))
    with pytest.raises(SlopeOutOfRange):
        validate_diagonal(PiecewiseLinear.from_points([(0, 0), ("2/3", 0), (1, 1)]))
    with pytest.raises(SlopeOutOfRange):
        validate_diagonal(PiecewiseLinear.from_points([(0, 0), ("1/4", "1/4"), ("1/2", 0), (1, 1)]))


def test_validation_errors_share_a_base():
    assert issubclass(SlopeOutOfRange, DiagonalValidationError)
    assert issubclass(EndpointMismatch, DiagonalValidationError)


def test_delta_hat_of_ex412(ex412):
    dh = delta_hat(ex412)
    assert dh(F(13, 80)) == F(13, 80)
    assert dh(F(11, 40)) == F(11, 40)
    assert dh(F(31, 80)) == F(13, 80)
    assert dh(F(1, 2)) == F(11, 40)
    assert dh(0) == 0 and dh(1) == 0


def test_identity_has_zero_delta_hat(m_diag):
    dh = delta_hat(m_diag)
    assert dh.is_zero()
    assert m_diag.is_identity()


def test_total_variation_is_signed(plateau):
    dh = delta_hat(plateau)
    assert total_variation(dh, F(1, 4), F(3, 4)) == F(1, 2)
    assert total_variation(dh, F(3, 4), F(1, 4)) == -F(1, 2)
    assert total_variation(dh, 0, 1) == 1


def test_extremum_on_interval(ex412):
    dh = delta_hat(ex412)
    assert extremum_on_interval(dh, F(13, 80), F(11, 20), "min") == (F(13, 80), F(13, 80))
    # endpoints in either order
    assert extremum_on_interval(dh, F(11, 20), F(13, 80), "min") == (F(13, 80), F(13, 80))
    assert extremum_on_interval(dh, 0, 1, "max") == (F(11, 40), F(11, 40))
    assert extremum_on_interval(dh, F(3, 10), F(1, 2), "min") == (F(13, 80), F(31, 80))


def test_extremum_on_degenerate_interval(kca):
    dh = delta_hat(kca)
    assert extremum_on_interval(dh, F(1, 2), F(1, 2), "max") == (F(3, 20), F(1, 2))


def test_zigzag_perturbation_distance(zigzag_base):
    for n in (1, 3, 10):
        dn = zigzag_perturb(zigzag_base, n)
        assert dn.pl.sup_distance(zigzag_base.pl) == F(1, 6 * n)
        assert set(dn.pl.slopes) <= {0, 2}
        assert dn(F(1, 3)) == zigzag_base(F(1, 3))
        assert dn(F(2, 3)) == zigzag_base(F(2, 3))


def test_zigzag_requires_slope_one(w_diag):
    with pytest.raises(NoSlopeOneSegment):
        zigzag_perturb(w_diag, 4)
    with pytest.raises(ValueError):
        zigzag_perturb(w_diag, 0)


def test_chordal_diagonal_values(x2_chords):
    assert x2_chords(F(3, 8)) == F(9, 64)
    assert len(x2_chords.breakpoints) == 17


def test_diagonal_from_hat_roundtrip(lying_rectangle):
    dh = delta_hat(lying_rectangle)
    assert dh(F(1, 10)) == F(1, 10)
    assert lying_rectangle(F(17, 20)) == F(4, 5)


def test_ordinal_points():
    d = diagonal_from_hat([(0, 0), ("1/4", "1/4"), ("1/2", 0), ("3/4", "1/4"), (1, 0)])
    assert ordinal_points(d) == [F(1, 2)]
    assert ordinal_points(chordal_diagonal(lambda x: x * x, 4)) == []


def test_extremum_rejects_unknown_kind(ex412):
    with pytest.raises(ValueError, match="which must be"):
        extremum_on_interval(delta_hat(ex412), 0, 1, "median")


unit_points = st.integers(0, 480).map(lambda k: F(k, 480))
PROPERTY_SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@PROPERTY_SETTINGS
@given(generic_diagonals(), unit_points, unit_points, unit_points)
def test_total_variation_is_additive(d, a, b, c):
    dh = delta_hat(d)
    assert total_variation(dh, a, b) + total_variation(dh, b, c) == total_variation(dh, a, c)
    assert abs(total_variation(dh, a, b)) >= abs(dh(b) - dh(a))


@PROPERTY_SETTINGS
@given(generic_diagonals(), unit_points, unit_points)
def test_tv_prefix_is_nondecreasing_and_lipschitz(d, a, b):
    dh = delta_hat(d)
    a, b = min(a, b), max(a, b)
    assert 0 <= dh.tv_prefix(b) - dh.tv_prefix(a) <= b - a
    assert dh.tv_prefix.is_nondecreasing()


@PROPERTY_SETTINGS
@given(generic_diagonals(), unit_points, unit_points, unit_points)
def test_extremum_grows_with_the_interval(d, a, b, c):
    dh = delta_hat(d)
    a, b, c = sorted((a, b, c))
    inner_min, at_min = extremum_on_interval(dh, b, c, "min")
    outer_min, _ = extremum_on_interval(dh, a, c, "min")
    inner_max, at_max = extremum_on_interval(dh, b, c, "max")
    outer_max, _ = extremum_on_interval(dh, a, c, "max")
    assert outer_min <= inner_min and outer_max >= inner_max
    assert dh(at_min) == inner_min and dh(at_max) == inner_max
    assert b <= at_min <= c and b <= at_max <= c
