import hashlib
from datetime import datetime
from typing import Any, Optional

from pydantic import BaseModel, Field


def instance_digest(document: bytes) -> str:
    """sha256 of the raw instance JSON."""
    return hashlib.sha256(document).hexdigest()


class RunReport(BaseModel):
    """One CLI invocation with enough provenance to re-run it.

    ``results`` is deterministic given the arguments, the instance and the
    seed; ``wall_time`` and ``timestamp`` are not.
    """
    id: Optional[int] = None
    timestamp: datetime = Field(default_factory=datetime.now)
    command: str
    arguments: dict[str, Any] = Field(default_factory=dict)
    instance_digest: Optional[str] = None
    seed: Optional[int] = None
    results: dict[str, Any] = Field(default_factory=dict)
    wall_time: float = 0.0
    exit_code: int = 0
