"""
Tests for the adjlab command-line application.
"""

import json

import pytest
from typer.testing import CliRunner

from adjlab import __version__
from adjlab.main import app
from adjlab.models import AgreementModel, L2Result
from adjlab.services.pipeline_service import PipelineService
from adjlab.tools.howald import infer_variables

runner = CliRunner()


@pytest.fixture(autouse=True)
def fresh_service(monkeypatch):
    """Build the pipeline service from the current environment in every test."""
    monkeypatch.setattr("adjlab.services.pipeline_service._pipeline_service", None)


def run_json(tmp_path, *args):
    """Invoke a command writing its JSON report to a file and return (result, report)."""
    path = tmp_path / "report.json"
    result = runner.invoke(app, [*args, "-o", str(path)])
    report = json.loads(path.read_text(encoding="utf-8")) if path.exists() else None
    return result, report


def test_version():
    """Test that --version prints the version and backend."""
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert f"adjlab {__version__} (sympy" in result.output


def test_resolve_smooth(tmp_path):
    """Test one divisor with m = 1 for the smooth example."""
    result, report = run_json(tmp_path, "resolve", "-i", "smooth")
    assert result.exit_code == 0
    assert [d["m"] for d in report["resolution"]["divisors"]] == [1]
    assert report["checks"]["discrepancies_agree"] is True
    assert report["problem"] == "smooth"


def test_multiplier_cusp(tmp_path):
    """Test the multiplier ideal of the cusp."""
    result, report = run_json(tmp_path, "multiplier", "-i", "cusp")
    assert result.exit_code == 0
    assert report["multiplier"]["generators"] == ["z1", "z2"]
    assert report["multiplier"]["lct"] == "5/6"


def test_howald(tmp_path):
    """Test the Newton-polyhedron oracle command."""
    result, report = run_json(tmp_path, "howald", "--ideal", "z1^3,z2^2")
    assert result.exit_code == 0
    assert report["variables"] == ["z1", "z2"]
    assert report["generators"] == ["z1", "z2"]


def test_howald_with_coefficient(tmp_path):
    """Test a rational coefficient and explicit variables."""
    result, report = run_json(tmp_path, "howald", "--ideal", "x^2,y^2,z^2", "--c", "1/2", "--variables", "x,y,z")
    assert result.exit_code == 0
    assert report["generators"] == "unit"


def test_infer_variables():
    """Test variable inference by first appearance."""
    assert infer_variables("z2^2, z1^3, z2*z1") == ["z2", "z1"]


def test_adjunct_cone(tmp_path):
    """Test residues of the cone."""
    result, report = run_json(tmp_path, "adjunct", "-i", "cone")
    assert result.exit_code == 0
    assert report["residues"][0]["identity_check"] is True
    assert report["mu_consistency"][0]["passed"] is True


def test_l2_is_reproducible(tmp_path):
    """Test that two runs with one seed write identical reports."""
    args = ["l2", "-i", "cone", "--seed", "42", "--shells", "2:7", "--samples", "2000"]
    first, report = run_json(tmp_path, *args)
    assert first.exit_code == 0
    second_path = tmp_path / "second.json"
    second = runner.invoke(app, [*args, "-o", str(second_path)])
    assert second.exit_code == 0
    assert second_path.read_text(encoding="utf-8") == (tmp_path / "report.json").read_text(encoding="utf-8")
    assert [entry["status"] for entry in report["agreement"]] == ["agree"]


def test_report_text(tmp_path):
    """Test the text rendering of a full report."""
    path = tmp_path / "report.txt"
    result = runner.invoke(app, ["report", "-i", "smooth", "--shells", "2:7", "--format", "text", "-o", str(path)])
    assert result.exit_code == 0
    text = path.read_text(encoding="utf-8")
    assert "multiplier:" in text
    assert "  lct: 1" in text


def test_missing_problem_exits_with_2():
    """Test that adjlab errors exit with code 2 and a JSON error."""
    result = runner.invoke(app, ["resolve", "-i", "no-such-problem"])
    assert result.exit_code == 2
    assert "INVALID_PROBLEM" in result.output


def test_bad_shells_exit_with_2():
    """Test that a malformed shell range is a configuration error."""
    result = runner.invoke(app, ["l2", "-i", "cusp", "--shells", "12"])
    assert result.exit_code == 2
    assert "CONFIGURATION_ERROR" in result.output


def test_disagreement_exits_with_1(tmp_path, monkeypatch):
    """Test exit code 1 when the agreement matrix has a disagreement."""
    disagreeing = L2Result(
        tool_version=__version__,
        backend="test",
        input_hash="0" * 64,
        problem="cusp",
        agreement=[AgreementModel(g="1", exact=True, numeric="divergent", status="disagree")],
    )
    monkeypatch.setattr(PipelineService, "run_l2", lambda self, source, **overrides: disagreeing)
    result, report = run_json(tmp_path, "l2", "-i", "cusp")
    assert result.exit_code == 1
    assert report["agreement"][0]["status"] == "disagree"


def test_short_shell_range_exits_with_2():
    """Test that fewer than four shells gives TOO_FEW_SHELLS and exit code 2."""
    result = runner.invoke(app, ["l2", "-i", "cusp", "--shells", "2:3"])
    assert result.exit_code == 2
    assert "TOO_FEW_SHELLS" in result.output
