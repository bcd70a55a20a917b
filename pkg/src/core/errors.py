"""Exception hierarchy for qfb.

Every domain error carries a stable ``code`` so the command line can emit a
single machine-parsable line per failure.
"""

from __future__ import annotations


class QfbError(Exception):
    """Base class for all domain errors."""

    code = "QFB_ERROR"

    def __init__(self, message: str, location: str | None = None) -> None:
        self.message = message
        self.location = location
        super().__init__(message if location is None else f"{location}: {message}")


class DimensionError(QfbError):
    """Raised when operator or state dimensions do not match."""

    code = "DIMENSION"


class NumericsError(QfbError):
    """Raised when a computed quantity leaves its numerical tolerance."""

    code = "NUMERICS"


class StateError(QfbError):
    """Raised when a state violates normalization or positivity."""

    code = "STATE"


class DomainTypeError(QfbError):
    """Raised when an operator lacks a required structural property."""

    code = "DOMAIN_TYPE"


class ZeroProbabilityError(QfbError):
    """
    Raised when a posterior is requested for an outcome below the floor.

    Attributes:
        probability: The branch probability that fell below the floor
    """

    code = "ZERO_PROBABILITY"

    def __init__(
        self,
        message: str,
        location: str | None = None,
        probability: float = 0.0,
    ) -> None:
        self.probability = probability
        super().__init__(message, location)


class NotCompleteMeasurementError(QfbError):
    """Raised when a rank-one (complete) measurement is required but absent."""

    code = "NOT_COMPLETE_MEASUREMENT"


class StrategyError(QfbError):
    """Raised when a strategy has no assignment at a reachable node."""

    code = "STRATEGY"


class OracleTooLargeError(QfbError):
    """
    Raised when exhaustive strategy enumeration exceeds its guard.

    Attributes:
        strategy_count: Number of strategies the scenario admits, or a lower
            bound on it when ``exact`` is False
        limit: Configured maximum
        exact: Whether strategy_count is the full count
    """

    code = "ORACLE_TOO_LARGE"

    def __init__(self, strategy_count: int, limit: int, exact: bool = True) -> None:
        self.strategy_count = strategy_count
        self.limit = limit
        self.exact = exact
        bound = "" if exact else "at least "
        super().__init__(
            f"Scenario admits {bound}{strategy_count} strategies, limit is {limit}"
        )


class ScenarioError(QfbError):
    """Raised when a scenario file violates its schema or an invariant."""

    code = "SCENARIO"


class RecordError(QfbError):
    """Raised when a measurement record does not fit the scenario's stages."""

    code = "RECORD"
