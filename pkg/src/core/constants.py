"""Application constants and default numerical settings for qfb."""

import os
from pathlib import Path

# Application metadata
APP_NAME = "qfb"
APP_VERSION = "1.0.0"
SCENARIO_SCHEMA_VERSION = 1

# Environment variables
THREADS_ENV_VAR = "QFB_THREADS"
LOG_DIR_ENV_VAR = "QFB_LOG_DIR"

# Base paths
APP_HOME = Path.home() / ".qfb"
LOGS_DIR = Path(os.environ.get(LOG_DIR_ENV_VAR) or APP_HOME / "logs")

# File paths
DEBUG_LOG_FILE = LOGS_DIR / "debug.log"
AUDIT_LOG_FILE = LOGS_DIR / "runs.log"

# Logging settings
DEBUG_LOG_MAX_BYTES = 5 * 1024 * 1024  # 5 MB
DEBUG_LOG_BACKUP_COUNT = 3

# Default tolerances (all overridable per scenario)
DEFAULT_TOLERANCES = {
    "hermiticity_tolerance": 1e-9,
    "norm_tolerance": 1e-9,
    "idempotency_tolerance": 1e-9,
    "psd_tolerance": 1e-9,
    "unitarity_tolerance": 1e-10,
    "numeric_tolerance": 1e-10,
    "normalization_tolerance": 1e-9,
    "zero_probability_floor": 1e-12,
}

# Scenario defaults
DEFAULT_HBAR = 1.0
DEFAULT_SUBSTEPS = 16

# Exhaustive strategy enumeration refuses problems above this many strategies
ORACLE_MAX_STRATEGIES = 10**7

# Simulation defaults
DEFAULT_TRAJECTORIES = 10_000
DEFAULT_SEED = 0

# Output formats understood by the CLI
OUTPUT_FORMATS = frozenset({"json", "csv"})
