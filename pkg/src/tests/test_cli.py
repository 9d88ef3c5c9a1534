"""Tests for the command-line interface."""

import json

import pytest
from typer.testing import CliRunner

import src.services.run_log as run_log_module
from src.cli import app
from src.services.run_log import RunLogService

runner = CliRunner()

DILEMMA = {"players": 2, "strategies": [2, 2], "costs": [[1, 3, 0, 2], [1, 0, 3, 2]], "name": "dilemma"}
TWO_LINKS = {
    "resources": 2,
    "delays": [{"a": 1, "b": 0}, {"a": 1, "b": 0}],
    "strategies": [[[0], [1]], [[0], [1]]],
}


@pytest.fixture(autouse=True)
def isolated_run_log(tmp_path, monkeypatch):
    """Point the run log at a temporary file."""
    log = RunLogService(str(tmp_path / "runs.json"))
    monkeypatch.setattr(run_log_module, "_run_log", log)
    return log


@pytest.fixture
def dilemma_file(tmp_path):
    path = tmp_path / "dilemma.json"
    path.write_text(json.dumps(DILEMMA))
    return path


@pytest.fixture
def links_file(tmp_path):
    path = tmp_path / "links.json"
    path.write_text(json.dumps(TWO_LINKS))
    return path


def results_of(output: str) -> dict:
    """Extract the printed JSON document, ignoring any log lines around it."""
    lines = output.splitlines()
    start = lines.index("{")
    end = len(lines) - 1 - lines[::-1].index("}")
    return json.loads("\n".join(lines[start:end + 1]))


class TestPoACommand:
    """Tests for the poa command."""

    def test_dilemma(self, dilemma_file):
        """Test the worst equilibrium costs twice the optimum."""
        result = runner.invoke(app, ["poa", str(dilemma_file)])
        assert result.exit_code == 0
        results = results_of(result.stdout)
        assert results["poa"] == "2"
        assert results["worst_equilibrium"] == [1, 1]
        assert results["optimum_value"] == "2"

    def test_extension_needs_alpha(self, dilemma_file):
        """Test a missing --alpha is an input error."""
        result = runner.invoke(app, ["poa", str(dilemma_file), "--extension", "altruism"])
        assert result.exit_code == 2

    def test_missing_file(self, tmp_path):
        """Test a missing instance exits with the input error code."""
        result = runner.invoke(app, ["poa", str(tmp_path / "absent.json")])
        assert result.exit_code == 2

    def test_budget_exceeded(self, dilemma_file):
        """Test a budget below the profile count."""
        result = runner.invoke(app, ["--budget", "1", "poa", str(dilemma_file)])
        assert result.exit_code == 3
        assert "error" in results_of(result.stdout)

    def test_csv_output(self, dilemma_file):
        """Test key,value output."""
        result = runner.invoke(app, ["--format", "csv", "poa", str(dilemma_file)])
        assert result.exit_code == 0
        assert "key,value" in result.stdout.splitlines()
        assert "poa,2" in result.stdout.splitlines()


class TestSmoothnessCommand:
    """Tests for the smoothness command."""

    def test_certificate_holds(self, dilemma_file):
        """Test (3, 0)-smoothness with s̄ = s* = the optimum."""
        result = runner.invoke(app, ["smoothness", str(dilemma_file), "--lambda", "3", "--mu", "0"])
        assert result.exit_code == 0
        results = results_of(result.stdout)
        assert results["verdict"] == "PASS"
        assert results["robust_bound"] == "3"

    def test_certificate_fails(self, dilemma_file):
        """Test a violated certificate reports its witness and exits 1."""
        result = runner.invoke(app, ["smoothness", str(dilemma_file), "--lambda", "2", "--mu", "0"])
        assert result.exit_code == 1
        results = results_of(result.stdout)
        assert results["verdict"] == "FAIL"
        assert results["witness"] == [1, 1]

    def test_needs_parameters(self, dilemma_file):
        """Test λ without μ is rejected."""
        result = runner.invoke(app, ["smoothness", str(dilemma_file), "--lambda", "3"])
        assert result.exit_code == 2


class TestScgCheckCommand:
    """Tests for the scg-check command."""

    def test_congestion_game(self, links_file):
        """Test a congestion game is SC-bounded but not an SCG."""
        result = runner.invoke(app, ["scg-check", str(links_file)])
        assert result.exit_code == 0
        results = results_of(result.stdout)
        assert results["sc_bounded"]["holds"] is True
        assert results["is_scg"]["holds"] is False
        assert results["scg_identity"]["holds"] is True

    def test_requires_defaults(self, dilemma_file):
        """Test a table game without defaults is an input error."""
        result = runner.invoke(app, ["scg-check", str(dilemma_file)])
        assert result.exit_code == 2


class TestFamilyCommand:
    """Tests for the family command."""

    def test_writes_documents(self, tmp_path):
        """Test the construction is verified and written out."""
        out = tmp_path / "schedB"
        result = runner.invoke(app, ["family", "schedB", "--param", "2", "--out", str(out)])
        assert result.exit_code == 0
        assert results_of(result.stdout)["ratio"] == "3/2"
        assert sorted(p.name for p in out.iterdir()) == ["alpha.json", "instance.json", "profiles.json"]

    def test_bad_parameter(self, tmp_path):
        """Test an out-of-range parameter."""
        result = runner.invoke(app, ["family", "mixedLB", "--param", "1", "--out", str(tmp_path / "x")])
        assert result.exit_code == 2


class TestDynamicsCommand:
    """Tests for the dynamics command."""

    def test_converges_with_decreasing_potential(self, links_file):
        """Test one improving move splits the players."""
        result = runner.invoke(app, ["dynamics", str(links_file), "--start", "0,0"])
        assert result.exit_code == 0
        results = results_of(result.stdout)
        assert results["status"] == "converged"
        assert results["final"] == [1, 0]
        assert results["potential"] == ["3", "2"]


class TestRunLogging:
    """Tests for run report recording."""

    def test_report_recorded(self, dilemma_file, isolated_run_log):
        """Test a run appends a report with the instance digest."""
        runner.invoke(app, ["poa", str(dilemma_file)])
        report = isolated_run_log.get_reports()[0]
        assert report.command == "poa"
        assert report.exit_code == 0
        assert report.results["poa"] == "2"
        assert len(report.instance_digest) == 64

    def test_no_log(self, dilemma_file, isolated_run_log):
        """Test --no-log skips the report."""
        runner.invoke(app, ["--no-log", "poa", str(dilemma_file)])
        assert isolated_run_log.get_reports() == []
