"""Logging configuration for qfb."""

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path

from .constants import (
    AUDIT_LOG_FILE,
    DEBUG_LOG_BACKUP_COUNT,
    DEBUG_LOG_FILE,
    DEBUG_LOG_MAX_BYTES,
    LOGS_DIR,
)

AUDIT_LOGGER_NAME = "audit"

DEBUG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
CONSOLE_FORMAT = "%(levelname)s %(name)s: %(message)s"
AUDIT_FORMAT = "%(asctime)s | %(levelname)s | %(message)s"


def _log_files(log_dir: Path | None) -> tuple[Path, Path]:
    """Resolve (debug, audit) file paths and make sure their directory exists."""
    if log_dir is None:
        log_dir, files = LOGS_DIR, (DEBUG_LOG_FILE, AUDIT_LOG_FILE)
    else:
        files = (log_dir / DEBUG_LOG_FILE.name, log_dir / AUDIT_LOG_FILE.name)
    log_dir.mkdir(parents=True, exist_ok=True)
    return files


def _with_format(handler: logging.Handler, level: int, fmt: str) -> logging.Handler:
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(fmt))
    return handler


def setup_logging(debug_mode: bool = False, log_dir: Path | None = None) -> None:
    """
    Configure application logging.

    Targets:
    - rotating debug file on the root logger, everything at DEBUG
    - standard error at WARNING, or DEBUG in debug mode
    - the ``audit`` logger, append-only, one line per command run

    Standard output is never used; it carries result payloads.

    Args:
        debug_mode: If True, also output DEBUG to the console
        log_dir: Directory for log files, defaults to LOGS_DIR
    """
    debug_file, audit_file = _log_files(log_dir)

    root = logging.getLogger()
    root.setLevel(logging.DEBUG)
    root.handlers.clear()
    root.addHandler(
        _with_format(
            RotatingFileHandler(
                debug_file,
                maxBytes=DEBUG_LOG_MAX_BYTES,
                backupCount=DEBUG_LOG_BACKUP_COUNT,
                encoding="utf-8",
            ),
            logging.DEBUG,
            DEBUG_FORMAT,
        )
    )
    root.addHandler(
        _with_format(
            logging.StreamHandler(sys.stderr),
            logging.DEBUG if debug_mode else logging.WARNING,
            CONSOLE_FORMAT,
        )
    )

    # Audit lines stay out of the debug file and the console
    audit = logging.getLogger(AUDIT_LOGGER_NAME)
    audit.setLevel(logging.INFO)
    audit.propagate = False
    audit.handlers.clear()
    audit.addHandler(
        _with_format(logging.FileHandler(audit_file, mode="a", encoding="utf-8"), logging.INFO, AUDIT_FORMAT)
    )


def get_audit_logger() -> logging.Logger:
    return logging.getLogger(AUDIT_LOGGER_NAME)


def log_run(command: str, scenario: str, success: bool, **fields: object) -> None:
    """
    Write one audit line for a command run.

    Format: ``OK|FAILED | command=<c> | scenario=<path> | k=v | ...`` with
    extra fields sorted by key.
    """
    parts = ["OK" if success else "FAILED", f"command={command}", f"scenario={scenario}"]
    parts.extend(f"{key}={value}" for key, value in sorted(fields.items()))
    get_audit_logger().info("%s", " | ".join(parts))
