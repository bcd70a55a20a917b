"""Configuration management for qfb: numerical tolerances and runtime settings."""

from __future__ import annotations

import logging
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any

from .constants import (
    DEFAULT_TOLERANCES,
    LOG_DIR_ENV_VAR,
    LOGS_DIR,
    THREADS_ENV_VAR,
)
from .errors import QfbError

logger = logging.getLogger(__name__)


class ConfigError(QfbError):
    """Raised when configuration is invalid."""

    code = "CONFIG"


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by every operation."""

    hermiticity_tolerance: float = DEFAULT_TOLERANCES["hermiticity_tolerance"]
    norm_tolerance: float = DEFAULT_TOLERANCES["norm_tolerance"]
    idempotency_tolerance: float = DEFAULT_TOLERANCES["idempotency_tolerance"]
    psd_tolerance: float = DEFAULT_TOLERANCES["psd_tolerance"]
    unitarity_tolerance: float = DEFAULT_TOLERANCES["unitarity_tolerance"]
    numeric_tolerance: float = DEFAULT_TOLERANCES["numeric_tolerance"]
    normalization_tolerance: float = DEFAULT_TOLERANCES["normalization_tolerance"]
    zero_probability_floor: float = DEFAULT_TOLERANCES["zero_probability_floor"]

    @classmethod
    def _validate_overrides(cls, overrides: dict[str, Any]) -> list[str]:
        """Validate override entries and return list of errors."""
        errors = []
        known = {f.name for f in fields(cls)}

        for key, value in overrides.items():
            if key not in known:
                errors.append(f"Unknown tolerance '{key}'")
            elif isinstance(value, bool) or not isinstance(value, (int, float)):
                errors.append(f"Tolerance '{key}' must be a number")
            elif not value > 0:
                errors.append(f"Tolerance '{key}' must be positive, got {value}")

        return errors

    @classmethod
    def from_overrides(cls, overrides: dict[str, Any] | None = None) -> Tolerances:
        """
        Build tolerances from defaults plus scenario overrides.

        Args:
            overrides: Mapping of tolerance name to value

        Returns:
            Tolerances instance

        Raises:
            ConfigError: If a key is unknown or a value is not a positive number
        """
        if not overrides:
            return cls()

        errors = cls._validate_overrides(overrides)
        if errors:
            for error in errors:
                logger.error("Tolerance validation error: %s", error)
            raise ConfigError(
                f"Tolerance validation failed: {'; '.join(errors)}",
                location="/tolerances",
            )

        return replace(cls(), **{k: float(v) for k, v in overrides.items()})

    def to_dict(self) -> dict[str, float]:
        """Convert to dictionary for serialization."""
        return asdict(self)

    def overrides(self) -> dict[str, float]:
        """Return only the entries that differ from the defaults."""
        return {k: v for k, v in self.to_dict().items() if v != DEFAULT_TOLERANCES[k]}


DEFAULT = Tolerances()


@dataclass(frozen=True)
class RuntimeSettings:
    """Process-level settings resolved from the environment and CLI flags."""

    threads: int = 0  # 0 = auto
    log_dir: Path = LOGS_DIR
    debug: bool = False

    @classmethod
    def from_env(cls, debug: bool = False) -> RuntimeSettings:
        """
        Resolve settings from environment variables.

        Raises:
            ConfigError: If QFB_THREADS is not a nonnegative integer
        """
        raw_threads = os.environ.get(THREADS_ENV_VAR, "0").strip() or "0"
        try:
            threads = int(raw_threads)
        except ValueError as e:
            raise ConfigError(
                f"{THREADS_ENV_VAR} must be an integer, got '{raw_threads}'"
            ) from e
        if threads < 0:
            raise ConfigError(f"{THREADS_ENV_VAR} must be >= 0, got {threads}")

        log_dir = Path(os.environ.get(LOG_DIR_ENV_VAR) or LOGS_DIR)
        return cls(threads=threads, log_dir=log_dir, debug=debug)
