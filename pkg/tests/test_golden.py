"""
Golden results for the bundled diagonals, through the library and the CLI
"""

import json
from fractions import Fraction
from pathlib import Path

import pytest
from typer.testing import CliRunner

from main import app
from src.core.analyzer import DiagonalAnalyzer
from src.core.asymmetry import run_mu_algorithm
from src.core.verify import cbar_equals_A, cbar_equals_K
from src.utils.config import load_config

from tests.conftest import DIAGONALS_DIR

GOLDEN = json.loads((Path(__file__).parent / "fixtures" / "bundled_diagonals.json").read_text())
NAMES = sorted(GOLDEN)

runner = CliRunner()


def fractions(values):
    return [Fraction(v) for v in values]


@pytest.mark.parametrize("name", NAMES)
def test_mu_report_matches_golden(name, diag_files):
    expected = GOLDEN[name]
    d = diag_files.read(name)
    report = run_mu_algorithm(d, oracle_n=64)
    assert report.mu == Fraction(expected["mu"])
    assert report.witness == tuple(fractions(expected["witness"]))
    assert [c.x_lo for c in report.omega] == fractions(expected["omega"])
    assert all(c.is_point for c in report.omega)
    assert report.is_simple == expected["is_simple"]


@pytest.mark.parametrize("name", NAMES)
def test_characterizations_match_golden(name, diag_files):
    expected = GOLDEN[name]
    d = diag_files.read(name)
    assert cbar_equals_K(d) == expected["cbar_equals_k"]
    assert cbar_equals_A(d) == expected["cbar_equals_a"]


@pytest.mark.parametrize("name", NAMES)
def test_asym_command_matches_golden(name, tmp_path, monkeypatch):
    monkeypatch.setenv("DIAGCOP_EXACT", "true")
    expected = GOLDEN[name]
    report, omega = tmp_path / "report.txt", tmp_path / "omega.csv"
    result = runner.invoke(app, [
        "asym", str(DIAGONALS_DIR / name), "--n", "64", "--out", str(report), "--omega-out", str(omega),
    ])
    assert result.exit_code == 0, result.output

    lines = report.read_text().splitlines()
    assert f"mu: {expected['mu']}" in lines
    assert f"witness_x: {expected['witness'][0]}" in lines
    assert f"witness_y: {expected['witness'][1]}" in lines
    assert [line for line in lines if line.startswith("omega: ")] == [f"omega: {x}" for x in expected["omega"]]

    rows = omega.read_text().splitlines()
    assert rows[0] == "x_lo,x_hi,lo_closed,hi_closed"
    assert rows[1:] == [f"{x},{x},true,true" for x in expected["omega"]]


@pytest.mark.parametrize("name", NAMES)
def test_bounds_command_matches_golden(name):
    expected = GOLDEN[name]
    result = runner.invoke(app, ["bounds", str(DIAGONALS_DIR / name), "--n", "12"])
    assert result.exit_code == 0, result.output

    analyzer = DiagonalAnalyzer(load_config())
    summary = analyzer.bounds_summary(analyzer.load(str(DIAGONALS_DIR / name)), 12)
    assert summary.cbar_equals_k == expected["cbar_equals_k"]
    assert summary.cbar_equals_a == expected["cbar_equals_a"]
    assert (summary.k_grid_gap == 0) == expected["cbar_equals_k"]
