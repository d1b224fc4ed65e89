"""
Tests for maximal asymmetry: every route, the witness set and the attaining copula
"""

from fractions import Fraction

import pytest

from src.core.asymmetry import (
    check_asymmetry_ceiling,
    is_simple,
    max_asym_copula,
    mu_maxmin,
    mu_simple,
    mu_via_H,
    omega_set,
    run_mu_algorithm,
    tau,
)
from src.core.bounds import k_copula
from src.core.diagonal import chordal_diagonal, delta_hat
from src.core.errors import EmptyOmega, NotSimple
from src.core.geometry import build_curves

F = Fraction


@pytest.fixture(scope="module")
def ex412_parts(ex412):
    dh = delta_hat(ex412)
    return dh, build_curves(ex412, dh)


def test_tau_at_witness(ex412_parts):
    dh, curves = ex412_parts
    assert tau(dh, curves.g_upper, F(13, 80)) == F(13, 80)


def test_ex412_maxmin_route(ex412_parts):
    dh, curves = ex412_parts
    assert mu_maxmin(dh, curves.g_upper) == (F(13, 80), F(13, 80))


def test_ex412_omega(ex412_parts):
    _, curves = ex412_parts
    omega = omega_set(curves.g_upper, curves.hset)
    assert all(c.is_point for c in omega)
    assert omega[0].x_lo == F(13, 80)
    assert F(31, 80) in [c.x_lo for c in omega]


def test_ex412_via_h(ex412_parts):
    dh, curves = ex412_parts
    omega = omega_set(curves.g_upper, curves.hset)
    assert mu_via_H(dh, omega) == (F(13, 80), F(13, 80))


def test_ex412_is_not_simple(ex412_parts):
    dh, curves = ex412_parts
    assert not is_simple(dh)
    with pytest.raises(NotSimple):
        mu_simple(dh, curves.g_upper, [])


def test_ex412_report(ex412):
    report = run_mu_algorithm(ex412, oracle_n=80)
    assert report.mu == F(13, 80)
    assert report.witness == (F(13, 80), F(11, 20))
    assert report.route_values.maxmin == report.route_values.via_h == F(13, 80)
    assert report.route_values.simple is None
    assert report.route_values.grid_oracle == pytest.approx(0.1625)
    assert report.attained_by == "CBAR|B"


def test_w_report(w_diag):
    report = run_mu_algorithm(w_diag, oracle_n=64)
    assert report.is_simple
    assert report.mu == F(1, 4)
    assert report.witness == (F(1, 4), F(3, 4))
    assert report.route_values.simple == F(1, 4)


def test_x2_report(x2_chords):
    report = run_mu_algorithm(x2_chords, oracle_n=64)
    assert report.mu == F(15, 64)
    assert report.witness == (F(3, 8), F(5, 8))


def test_identity_has_no_asymmetry(m_diag):
    report = run_mu_algorithm(m_diag, oracle_n=16)
    assert report.mu == 0
    assert report.omega == []
    dh = delta_hat(m_diag)
    with pytest.raises(EmptyOmega):
        mu_via_H(dh, [])
    assert mu_simple(dh, build_curves(m_diag, dh).g_upper, []) == (0, 0)


@pytest.mark.parametrize("name", ["kca", "plateau", "zigzag_base", "lying_rectangle"])
def test_routes_agree_on_bundled_diagonals(name, request):
    d = request.getfixturevalue(name)
    report = run_mu_algorithm(d, oracle_n=40)
    assert 0 < report.mu <= F(1, 3)
    q = max_asym_copula(d)
    x, y = report.witness
    assert q(x, y) - q(y, x) == report.mu


def test_asymmetry_ceiling(ex412, kca):
    holds, value, mu = check_asymmetry_ceiling(max_asym_copula(ex412), ex412, 80)
    assert holds and value == mu == F(13, 80)
    holds, value, mu = check_asymmetry_ceiling(k_copula(kca), kca, 10)
    assert holds and value == 0


def test_is_simple_accepts_flat_top(zigzag_base):
    assert is_simple(delta_hat(zigzag_base))


def test_bundled_x2_file(diag_files):
    d = diag_files.read("ex_x2.diag")
    report = run_mu_algorithm(d, oracle_n=128)
    assert report.mu == F(15, 64)
    assert report.witness == (F(3, 8), F(5, 8))
    assert report.is_simple and report.route_values.simple == F(15, 64)


@pytest.mark.slow
def test_fine_x2_chords():
    d = chordal_diagonal(lambda x: x * x, 1024, provenance="x2-1024")
    curves = build_curves(d)
    assert curves.g_upper(F(3, 8)) == F(5, 8)
    report = run_mu_algorithm(d, oracle_n=None, curves=curves)
    assert report.mu == F(15, 64)
    assert report.witness == (F(3, 8), F(5, 8))
