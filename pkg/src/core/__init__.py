"""Core module for qfb: configuration, errors, logging and report models."""

from .config import ConfigError, RuntimeSettings, Tolerances
from .errors import (
    DimensionError,
    DomainTypeError,
    NotCompleteMeasurementError,
    NumericsError,
    OracleTooLargeError,
    QfbError,
    RecordError,
    ScenarioError,
    StateError,
    StrategyError,
    ZeroProbabilityError,
)
from .logging_config import setup_logging, get_audit_logger, log_run
from .models import (
    OutcomeDistribution,
    SimResult,
    TransitionKernel,
    ValidationCheck,
    ValidationReport,
)

__all__ = [
    # Config
    "ConfigError",
    "RuntimeSettings",
    "Tolerances",
    # Errors
    "QfbError",
    "RecordError",
    "DimensionError",
    "DomainTypeError",
    "NotCompleteMeasurementError",
    "NumericsError",
    "OracleTooLargeError",
    "ScenarioError",
    "StateError",
    "StrategyError",
    "ZeroProbabilityError",
    # Logging
    "setup_logging",
    "get_audit_logger",
    "log_run",
    # Models
    "OutcomeDistribution",
    "SimResult",
    "TransitionKernel",
    "ValidationCheck",
    "ValidationReport",
]
