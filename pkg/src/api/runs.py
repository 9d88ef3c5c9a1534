"""Run log endpoints."""

from typing import Optional

from fastapi import APIRouter, Query

from ..services.run_log import get_run_log

router = APIRouter()


@router.get("/")
async def get_runs(
    command: Optional[str] = Query(None, description="Filter by command name"),
    limit: int = Query(100, ge=1, le=1000, description="Maximum number of reports to return"),
    offset: int = Query(0, ge=0, description="Number of reports to skip"),
):
    """Get recorded run reports, newest first."""
    reports = get_run_log().get_reports(command=command, limit=limit, offset=offset)
    return {
        "reports": [report.model_dump(mode="json") for report in reports],
        "count": len(reports),
        "limit": limit,
        "offset": offset,
    }
