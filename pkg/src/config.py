"""Runtime settings read from the environment."""

import os
from dataclasses import dataclass, field
from typing import Optional

from dotenv import load_dotenv

load_dotenv()

DEFAULT_ENUMERATION_BUDGET = 10_000_000


def _split_origins(raw: str) -> tuple[str, ...]:
    return tuple(origin.strip() for origin in raw.split(",") if origin.strip())


@dataclass
class Settings:
    """Analysis settings.

    Attributes:
        enumeration_budget: Maximum number of profiles any exhaustive pass may visit
        default_seed: Seed used by sweeps and generators when none is given
        log_level: Root logging level for the CLI and the API
        run_log_path: JSON file the run log appends reports to
        congestion_family_size: Block count used by the table reproduction
        scheduling_family_size: Machine count used by the table reproduction
        cors_origins: Origins allowed by the HTTP API
    """
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET
    default_seed: int = 0
    log_level: str = "INFO"
    run_log_path: str = "run_reports.json"
    congestion_family_size: int = 200
    scheduling_family_size: int = 8
    cors_origins: tuple[str, ...] = field(default_factory=lambda: ("http://localhost:3000",))

    @classmethod
    def from_env(cls) -> "Settings":
        """Create settings from environment variables."""
        return cls(
            enumeration_budget=int(os.getenv("POA_ENUMERATION_BUDGET", str(DEFAULT_ENUMERATION_BUDGET))),
            default_seed=int(os.getenv("POA_DEFAULT_SEED", "0")),
            log_level=os.getenv("POA_LOG_LEVEL", "INFO").upper(),
            run_log_path=os.getenv("POA_RUN_LOG_PATH", "run_reports.json"),
            congestion_family_size=int(os.getenv("POA_CONGESTION_FAMILY_SIZE", "200")),
            scheduling_family_size=int(os.getenv("POA_SCHEDULING_FAMILY_SIZE", "8")),
            cors_origins=_split_origins(os.getenv("POA_API_CORS_ORIGINS", "http://localhost:3000")),
        )


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create the process-wide settings."""
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def reset_settings() -> None:
    """Forget cached settings so the next call re-reads the environment."""
    global _settings
    _settings = None
