"""Run log service recording every CLI report."""

import json
import logging
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from ..config import get_settings
from ..schemas.report import RunReport


class RunLogService:
    """Append-only JSON log of run reports."""

    def __init__(self, storage_path: Optional[str] = None):
        self.storage_path = Path(storage_path or get_settings().run_log_path)
        self.storage_path.parent.mkdir(parents=True, exist_ok=True)
        self.logger = logging.getLogger("run_log")
        self._reports: list[RunReport] = []
        self._load_reports()

    def _load_reports(self) -> None:
        if not self.storage_path.exists():
            self._reports = []
            return
        try:
            with open(self.storage_path, "r") as f:
                data = json.load(f)
            self._reports = [RunReport.model_validate(item) for item in data]
        except (json.JSONDecodeError, ValidationError, TypeError, IOError) as e:
            self.logger.error(f"Failed to load run log, starting empty: {e}")
            self._reports = []

    def _save_reports(self) -> None:
        try:
            with open(self.storage_path, "w") as f:
                json.dump([report.model_dump(mode="json") for report in self._reports], f, indent=2)
        except IOError as e:
            self.logger.error(f"Failed to save run log: {e}")

    def _get_next_id(self) -> int:
        if not self._reports:
            return 1
        return max(report.id or 0 for report in self._reports) + 1

    def record(self, report: RunReport) -> RunReport:
        """Assign the next id and persist the report."""
        stored = report.model_copy(update={"id": self._get_next_id()})
        self._reports.append(stored)
        self._save_reports()
        self.logger.info(f"RUN {stored.id}: {stored.command} exit={stored.exit_code}")
        return stored

    def get_reports(self, command: Optional[str] = None, limit: int = 100, offset: int = 0) -> list[RunReport]:
        """Newest first, optionally restricted to one command."""
        reports = self._reports
        if command:
            reports = [r for r in reports if r.command == command]
        reports = sorted(reports, key=lambda r: r.id or 0, reverse=True)
        return reports[offset:offset + limit]

    def clear(self) -> None:
        self._reports = []
        self._save_reports()


_run_log: Optional[RunLogService] = None


def get_run_log() -> RunLogService:
    """Get or create the process-wide run log."""
    global _run_log
    if _run_log is None:
        _run_log = RunLogService()
    return _run_log
