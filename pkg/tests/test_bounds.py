"""
Tests for U, C-bar, Bertino, A, K, splices and transposes
"""

from fractions import Fraction

import numpy as np
import pytest

from src.core.bounds import (
    ConstructionKind,
    a_quasi,
    bertino,
    build_fsplit,
    build_family,
    cbar,
    cbar_formula_grid,
    cbar_tv_formula,
    evaluator_for,
    f_delta,
    f_delta_tv,
    k_copula,
    splice,
    transpose,
    u_delta,
)
from src.core.diagonal import delta_hat
from src.core.errors import DiagonalMismatch, OutOfDomain
from src.core.verify import grid_points

F = Fraction


def test_kca_values(kca):
    x, y = F(3, 10), F(7, 10)
    assert k_copula(kca)(x, y) == F(1, 5)
    assert cbar(kca)(x, y) == F(1, 4)
    assert a_quasi(kca)(x, y) == F(3, 10)


def test_fsplit_matches_tv_form(plateau):
    dh = delta_hat(plateau)
    fs = build_fsplit(plateau, dh)
    assert f_delta(fs, F(1, 4), F(3, 4)) == F(1, 4)
    for x, y in [(F(1, 4), F(3, 4)), (F(3, 4), F(1, 4)), (F(1, 8), F(7, 8)), (F(5, 8), F(5, 8))]:
        assert f_delta(fs, x, y) == f_delta_tv(dh, x, y)


def test_fsplit_parts_are_increasing_and_lipschitz(ex412):
    fs = build_fsplit(ex412)
    for part in (fs.f1, fs.f2):
        assert all(0 <= s <= 1 for s in part.slopes)
    assert fs.f1(0) == 0


def test_f_on_diagonal_is_delta(ex412):
    fs = build_fsplit(ex412)
    for t in (F(0), F(13, 80), F(1, 2), F(29, 40), F(1)):
        assert f_delta(fs, t, t) == ex412(t)


def test_w_fsplit_parts_coincide(w_diag):
    fs = build_fsplit(w_diag)
    assert fs.f1.simplified() == fs.f2.simplified()


def test_chordal_x2_values(x2_chords):
    fs = build_fsplit(x2_chords)
    assert u_delta(x2_chords)(F(1, 4), F(3, 4)) == F(1, 4)
    assert f_delta(fs, F(1, 4), F(3, 4)) == F(1, 2)
    assert bertino(x2_chords)(F(1, 4), F(3, 4)) == F(1, 16)


def test_cbar_pointwise_equals_tv_formula(ex412, kca):
    for d in (ex412, kca):
        dh = delta_hat(d)
        q = cbar(d, dh)
        for x, y in [(F(3, 10), F(7, 10)), (F(13, 80), F(11, 20)), (F(9, 10), F(1, 5)), (F(1, 2), F(1, 2))]:
            assert q(x, y) == cbar_tv_formula(dh, x, y)


def test_cbar_grid_matches_formula_grid(ex412):
    dh = delta_hat(ex412)
    pts = grid_points(10, ex412)
    assert np.array_equal(cbar(ex412, dh).grid(pts), cbar_formula_grid(dh, pts))


@pytest.mark.parametrize("kind", list(ConstructionKind)[:-1])
def test_grid_matches_pointwise(kind, kca):
    q = evaluator_for(kind, kca)
    pts = grid_points(6, kca)
    z = q.grid(pts)
    for i, x in enumerate(pts):
        for j, y in enumerate(pts):
            assert z[i, j] == q(x, y)


def test_boundary_conditions(ex412):
    for q in vars(build_family(ex412)).values():
        for t in (F(0), F(13, 80), F(3, 7), F(1)):
            assert q(t, 0) == 0 and q(0, t) == 0
            assert q(t, 1) == t and q(1, t) == t
            assert q(t, t) == ex412(t)


def test_symmetric_constructions(kca):
    fam = build_family(kca)
    for q in (fam.cbar, fam.bertino, fam.a, fam.k):
        assert q(F(1, 5), F(4, 5)) == q(F(4, 5), F(1, 5))


def test_bertino_is_lower_bound(ex412):
    assert bertino(ex412)(F(13, 80), F(11, 20)) == F(13, 80) - F(13, 80)


def test_splice_and_transpose(ex412):
    dh = delta_hat(ex412)
    s = splice(cbar(ex412, dh), bertino(ex412, dh))
    x, y = F(13, 80), F(11, 20)
    assert s(x, y) == cbar(ex412, dh)(x, y)
    assert s(y, x) == bertino(ex412, dh)(y, x)
    assert s.tag == "CBAR|B"
    t = transpose(s)
    assert t(x, y) == s(y, x)
    assert t.tag == "CBAR|B^t"


def test_splice_rejects_mismatched_diagonals(ex412, kca):
    with pytest.raises(DiagonalMismatch):
        splice(cbar(ex412), bertino(kca))


def test_out_of_domain(kca):
    with pytest.raises(OutOfDomain):
        cbar(kca)(F(-1, 2), F(1, 2))
    with pytest.raises(OutOfDomain):
        k_copula(kca)(F(1, 2), F(3, 2))


def test_identity_collapses_everything_to_min(m_diag):
    for q in vars(build_family(m_diag)).values():
        assert q(F(1, 3), F(3, 4)) == F(1, 3)


def test_transpose_kind_has_no_standalone_evaluator(kca):
    with pytest.raises(ValueError):
        evaluator_for(ConstructionKind.TRANSPOSE, kca)
