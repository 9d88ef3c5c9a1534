"""Health check endpoints."""

from fastapi import APIRouter

from ..config import get_settings

router = APIRouter()

SERVICE_NAME = "poa-toolkit"


@router.get("/health")
async def health_check():
    """Returns 200 OK while the process is running."""
    return {"status": "healthy", "service": SERVICE_NAME}


@router.get("/ready")
async def readiness_check():
    """Returns 200 OK once settings load; reports the enumeration budget in force."""
    settings = get_settings()
    return {"status": "ready", "service": SERVICE_NAME, "enumeration_budget": settings.enumeration_budget}
