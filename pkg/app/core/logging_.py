# Path from repo root: app/core/logging_.py
from __future__ import annotations

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path

from app.core.config import Settings, get_settings


class StartsWithFilter(logging.Filter):
    """Allows only log records whose logger names start with the given prefix (e.g., "trainer")."""

    def __init__(self, prefix: str) -> None:
        super().__init__()
        self.prefix = prefix

    def filter(self, record: logging.LogRecord) -> bool:
        return record.name.startswith(self.prefix)


def _level(name: str, default: int) -> int:
    """Convert a level name ("info", "DEBUG") to its logging constant, falling back to `default`."""
    value = getattr(logging, str(name).upper(), None)
    return value if isinstance(value, int) else default


def setup_logging(settings: Settings | None = None, *, stream=None) -> None:
    """
    Configure logging: console output and optional rotating log files.

    Sets up:
      1. Console logging for the root logger (stdout unless `stream` is given).
      2. Error log file (ERROR+) if enabled.
      3. Trainer-specific log file (trainer.* only) if enabled.

    Args:
        settings (Settings | None): Settings to read levels and file toggles from.
            Defaults to the cached `get_settings()`.
        stream (TextIO | None): Console target. Defaults to sys.stdout.

    Returns:
        None. Handlers installed by an earlier call are replaced, not duplicated.
    """
    s = settings or get_settings()

    console = logging.StreamHandler(stream or sys.stdout)
    console.setLevel(_level(s.LOG_LEVEL, logging.INFO))
    console.setFormatter(logging.Formatter(s.LOG_CONSOLE_FORMAT))

    root = logging.getLogger()
    root.setLevel(min(_level(s.LOG_LEVEL, logging.INFO), _level(s.LOG_LEVEL_TRAINER, logging.INFO)))
    root.handlers.clear()
    root.addHandler(console)

    if s.LOG_ERRORS_TO_FILE:
        err_path: Path = s.ERROR_LOG_FILE
        err_path.parent.mkdir(parents=True, exist_ok=True)
        err_fh = RotatingFileHandler(
            err_path,
            maxBytes=s.ERROR_LOG_MAX_BYTES,
            backupCount=s.ERROR_LOG_BACKUPS,
            encoding="utf-8",
        )
        err_fh.setLevel(logging.ERROR)
        err_fh.setFormatter(logging.Formatter(s.LOG_CONSOLE_FORMAT))
        root.addHandler(err_fh)

    if s.LOG_TRAINER_TO_FILE:
        tr_path: Path = s.TRAINER_LOG_FILE
        tr_path.parent.mkdir(parents=True, exist_ok=True)
        tr_fh = RotatingFileHandler(
            tr_path,
            maxBytes=2_000_000,
            backupCount=3,
            encoding="utf-8",
        )
        tr_fh.setLevel(_level(s.LOG_LEVEL_TRAINER, logging.INFO))
        tr_fh.setFormatter(logging.Formatter(s.LOG_CONSOLE_FORMAT))
        tr_fh.addFilter(StartsWithFilter("trainer"))
        root.addHandler(tr_fh)

    logging.getLogger("uvicorn.access").setLevel(logging.WARNING)
