"""
Tests for the command-line interface
"""

from fractions import Fraction

import pytest
from typer.testing import CliRunner

import main
from main import app
from src.models.copula_models import GridReport

from tests.conftest import DIAGONALS_DIR

runner = CliRunner()


def diag(name: str) -> str:
    return str(DIAGONALS_DIR / name)


def test_asym_prints_mu(tmp_path):
    report = tmp_path / "report.txt"
    result = runner.invoke(app, ["asym", diag("ex412.diag"), "--n", "80", "--out", str(report)])
    assert result.exit_code == 0, result.output
    assert "mu = 13/80 (0.1625)" in result.output
    assert "witness = (13/80, 11/20)" in result.output
    assert "mu: 13/80" in report.read_text()


def test_eval_prints_exact_value():
    result = runner.invoke(app, ["eval", diag("exKCA.diag"), "--kind", "K", "--at", "3/10,7/10"])
    assert result.exit_code == 0, result.output
    assert result.output.strip().splitlines()[-1] == "1/5"


def test_eval_accepts_decimals():
    result = runner.invoke(app, ["eval", diag("exKCA.diag"), "--kind", "CBAR", "--at", "0.3,0.7"])
    assert result.exit_code == 0, result.output
    assert result.output.strip().splitlines()[-1] == "1/4"


def test_eval_rejects_unknown_kind():
    result = runner.invoke(app, ["eval", diag("exKCA.diag"), "--kind", "Z", "--at", "0.3,0.7"])
    assert result.exit_code == 1


def test_validate_reports_slope_error(tmp_path):
    bad = tmp_path / "bad.diag"
    bad.write_text("0 0\n2/3 0\n1 1\n")
    result = runner.invoke(app, ["validate", str(bad)])
    assert result.exit_code == 1
    assert "SlopeOutOfRange" in result.output


def test_validate_accepts_bundled_file():
    result = runner.invoke(app, ["validate", diag("w.diag")])
    assert result.exit_code == 0, result.output
    assert "Valid" in result.output


def test_missing_file_exit_code(tmp_path):
    result = runner.invoke(app, ["validate", str(tmp_path / "missing.diag")])
    assert result.exit_code == 3


def test_invalid_grid_size():
    result = runner.invoke(app, ["grid", diag("w.diag"), "--n", "1"])
    assert result.exit_code == 1


def test_grid_export(tmp_path):
    out = tmp_path / "k.csv"
    result = runner.invoke(app, ["grid", diag("exKCA.diag"), "--kind", "K", "--n", "10", "--exact", "--out", str(out)])
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    assert lines[0] == "x,y,value"
    assert "3/10,7/10,1/5" in lines


def test_bounds_summary():
    result = runner.invoke(app, ["bounds", diag("exKCA.diag"), "--n", "10"])
    assert result.exit_code == 0, result.output
    assert "C-bar = K" in result.output


def test_bounds_exit_code_when_copula_check_fails(monkeypatch):
    failing = GridReport(n=4, points=5, exact=True, grounded_ok=True, marginals_ok=True,
                         lipschitz_ok=True, min_volume=Fraction(-1, 100), is_copula_on_grid=False)
    monkeypatch.setattr(main, "copula_suite", lambda d, n, exact=True, workers=None: {"U": failing})
    result = runner.invoke(app, ["bounds", diag("w.diag"), "--n", "4"])
    assert result.exit_code == 4


def test_regions_classifies_points(tmp_path):
    out = tmp_path / "curves.csv"
    result = runner.invoke(app, ["regions", diag("plateau.diag"), "--out", str(out), "--at", "1/4,3/4"])
    assert result.exit_code == 0, result.output
    assert "(1/4, 3/4) -> Dx" in result.output
    assert out.read_text().startswith("x,y_low,y_high,kind")


@pytest.mark.parametrize("what", ["curves", "regions", "heatmap", "scatter"])
def test_plot(tmp_path, what):
    out = tmp_path / f"{what}.svg"
    result = runner.invoke(app, ["plot", diag("w.diag"), "--what", what, "--n", "8", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert out.read_text().startswith("<?xml")


def test_sample(tmp_path):
    out = tmp_path / "samples.csv"
    result = runner.invoke(app, ["sample", diag("w.diag"), "--count", "50", "--seed", "3", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert len(out.read_text().splitlines()) == 51


def test_perturb_table():
    result = runner.invoke(app, ["perturb", diag("dhat.diag"), "--teeth", "2", "--teeth", "5", "--n", "6"])
    assert result.exit_code == 0, result.output
    assert "1/30" in result.output


def test_perturb_needs_slope_one():
    result = runner.invoke(app, ["perturb", diag("w.diag"), "--teeth", "2"])
    assert result.exit_code == 1


def test_setup_writes_env(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    result = runner.invoke(app, ["setup"])
    assert result.exit_code == 0, result.output
    assert (tmp_path / ".env").exists()
