"""
Basic settings and logging configuration for the ehdo command-line tool.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path

LOG_ENV_VAR = "EHDO_LOG"

_LEVELS = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
}


@dataclass(slots=True)
class Settings:
    """Process-level settings."""

    project_root: Path
    log_level: int = logging.WARNING
    log_file: Path | None = None

    @classmethod
    def default(cls) -> "Settings":
        """Create default settings from the package location and EHDO_LOG."""
        project_root = Path(__file__).resolve().parents[2]
        return cls(project_root=project_root, log_level=parse_log_level(os.environ.get(LOG_ENV_VAR)))


def parse_log_level(raw: str | None) -> int:
    """Map an EHDO_LOG value to a logging level; unknown values mean WARNING."""
    if not raw:
        return logging.WARNING
    return _LEVELS.get(raw.strip().upper(), logging.WARNING)


def init_logging(settings: Settings) -> None:
    """Configure logging to stderr and an optional file."""
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if settings.log_file is not None:
        handlers.append(logging.FileHandler(settings.log_file, encoding="utf-8"))

    logging.basicConfig(
        level=settings.log_level,
        format="%(asctime)s [%(levelname)s] %(name)s - %(message)s",
        handlers=handlers,
        force=True,
    )

    logging.getLogger(__name__).debug(
        "Logging initialized at %s", logging.getLevelName(settings.log_level)
    )
