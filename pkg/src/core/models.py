"""Core data models for qfb reports and classical results."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Hashable, Sequence

import numpy as np


def label_to_json(label: Hashable) -> Any:
    """Convert an outcome label to a JSON value (tuples become lists)."""
    if isinstance(label, tuple):
        return [label_to_json(part) for part in label]
    if isinstance(label, (np.integer,)):
        return int(label)
    if isinstance(label, (np.floating,)):
        return float(label)
    return label


def label_from_json(value: Any) -> Hashable:
    """Inverse of label_to_json (lists become tuples)."""
    if isinstance(value, list):
        return tuple(label_from_json(part) for part in value)
    return value


def label_text(label: Hashable) -> str:
    """Compact text form of a label for CSV cells."""
    if isinstance(label, tuple):
        return "(" + ",".join(label_text(part) for part in label) + ")"
    return str(label)


@dataclass
class ValidationCheck:
    """A single numerical check with its residual."""

    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "detail": self.detail,
        }


@dataclass
class ValidationReport:
    """Result of validating an instrument, channel or scenario."""

    subject: str
    checks: list[ValidationCheck] = field(default_factory=list)
    # Measured but never pass/fail
    properties: dict[str, Any] = field(default_factory=dict)

    @property
    def is_valid(self) -> bool:
        """Return True if every check passed."""
        return all(check.passed for check in self.checks)

    def add_check(
        self,
        name: str,
        residual: float,
        tolerance: float,
        passed: bool | None = None,
        detail: str = "",
    ) -> ValidationCheck:
        """
        Record a check; by default it passes iff residual ≤ tolerance.
        """
        if passed is None:
            passed = residual <= tolerance
        check = ValidationCheck(name, float(residual), float(tolerance), bool(passed), detail)
        self.checks.append(check)
        return check

    def add_property(self, name: str, value: Any) -> None:
        """Record an informational measurement; it never affects is_valid."""
        if isinstance(value, (np.floating, np.bool_)):
            value = value.item()
        self.properties[name] = value

    def extend(self, other: ValidationReport, prefix: str = "") -> None:
        """Append another report's checks and properties, optionally prefixing their names."""
        for check in other.checks:
            self.checks.append(
                ValidationCheck(
                    prefix + check.name, check.residual, check.tolerance, check.passed, check.detail
                )
            )
        for name, value in other.properties.items():
            self.properties[prefix + name] = value

    def check(self, name: str) -> ValidationCheck:
        """Return the first check with the given name."""
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "subject": self.subject,
            "is_valid": self.is_valid,
            "checks": [c.to_dict() for c in self.checks],
            "properties": dict(self.properties),
        }


@dataclass
class OutcomeDistribution:
    """Probabilities over an ordered outcome set."""

    outcomes: tuple[Hashable, ...]
    probabilities: np.ndarray

    def probability(self, label: Hashable) -> float:
        """Probability of a single outcome."""
        return float(self.probabilities[self.outcomes.index(label)])

    def as_dict(self) -> dict[Hashable, float]:
        """Mapping label → probability."""
        return {label: float(p) for label, p in zip(self.outcomes, self.probabilities)}

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "outcomes": [label_to_json(v) for v in self.outcomes],
            "probabilities": [float(p) for p in self.probabilities],
        }


@dataclass
class TransitionKernel:
    """
    Row-stochastic transition matrices over measurement outcomes for one stage.

    ``matrices[i]`` is π(v → v′ | u_i) for the i-th control of the stage grid,
    rows indexed by ``source_outcomes`` and columns by ``target_outcomes``.
    """

    stage: int
    controls: list[tuple[float, ...]]
    source_outcomes: tuple[Hashable, ...]
    target_outcomes: tuple[Hashable, ...]
    matrices: np.ndarray

    def for_control(self, index: int) -> np.ndarray:
        """Transition matrix for one control of the grid."""
        return self.matrices[index]

    def row_sum_residual(self) -> float:
        """max |Σ_v′ π(v → v′) − 1| over all controls and rows."""
        return float(np.max(np.abs(self.matrices.sum(axis=2) - 1.0)))

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "stage": self.stage,
            "source_outcomes": [label_to_json(v) for v in self.source_outcomes],
            "target_outcomes": [label_to_json(v) for v in self.target_outcomes],
            "kernels": [
                {
                    "control_index": i,
                    "control": list(control),
                    "matrix": self.matrices[i].tolist(),
                }
                for i, control in enumerate(self.controls)
            ],
        }


@dataclass
class SimResult:
    """Monte Carlo estimate of a strategy's expected risk."""

    trajectories: int
    seed: int
    mean_risk: float
    standard_error: float
    outcome_frequencies: list[dict[Hashable, float]] = field(default_factory=list)
    costs: list[float] | None = None
    records: list[tuple[Hashable, ...]] | None = None

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        data = {
            "trajectories": self.trajectories,
            "seed": self.seed,
            "mean_risk": self.mean_risk,
            "standard_error": self.standard_error,
            "outcome_frequencies": [
                [{"outcome": label_to_json(v), "frequency": f} for v, f in stage.items()]
                for stage in self.outcome_frequencies
            ],
        }
        if self.costs is not None:
            data["costs"] = list(self.costs)
        if self.records is not None:
            data["records"] = [[label_to_json(v) for v in record] for record in self.records]
        return data

    def to_json(self, indent: int = 2) -> str:
        """Serialize to JSON string."""
        return json.dumps(self.to_dict(), indent=indent)


def record_text(record: Sequence[Hashable]) -> str:
    """Text form of a measurement record, e.g. ``0|1|1``."""
    return "|".join(label_text(v) for v in record)
