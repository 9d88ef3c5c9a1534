"""Unit tests for the run log."""

import pytest

from src.schemas import RunReport
from src.services.run_log import RunLogService


@pytest.fixture
def run_log(tmp_path):
    """Create a run log in a temporary file."""
    return RunLogService(str(tmp_path / "runs.json"))


class TestRunLog:
    """Tests for RunLogService."""

    def test_ids_are_sequential(self, run_log):
        """Test recorded reports get increasing ids."""
        first = run_log.record(RunReport(command="poa"))
        second = run_log.record(RunReport(command="table1", exit_code=1))
        assert (first.id, second.id) == (1, 2)

    def test_newest_first_with_filter(self, run_log):
        """Test ordering and command filtering."""
        run_log.record(RunReport(command="poa"))
        run_log.record(RunReport(command="table1"))
        run_log.record(RunReport(command="poa"))
        assert [r.id for r in run_log.get_reports()] == [3, 2, 1]
        assert [r.id for r in run_log.get_reports(command="poa", limit=1)] == [3]
        assert [r.id for r in run_log.get_reports(offset=2)] == [1]

    def test_persisted(self, tmp_path, run_log):
        """Test reports are reloaded from disk."""
        run_log.record(RunReport(command="family", results={"ratio": "2"}))
        reloaded = RunLogService(str(tmp_path / "runs.json"))
        assert reloaded.get_reports()[0].results == {"ratio": "2"}

    def test_corrupted_log_starts_empty(self, tmp_path):
        """Test a corrupted log is treated as empty."""
        path = tmp_path / "runs.json"
        path.write_text("[{broken")
        assert RunLogService(str(path)).get_reports() == []

    def test_clear(self, run_log):
        """Test clearing removes every report."""
        run_log.record(RunReport(command="poa"))
        run_log.clear()
        assert run_log.get_reports() == []
        assert run_log.record(RunReport(command="poa")).id == 1
