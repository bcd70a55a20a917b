"""Kraus-form measurement instruments over finite outcome sets.

An instrument is a family {F_v} with weights μ_v (the counting measure by
default). Each outcome v acts on states as ρ ↦ μ_v F_v ρ F_v†; the family is
normalized when Σ_v μ_v F_v†F_v = I.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from src.core.config import DEFAULT, Tolerances
from src.core.errors import DimensionError
from src.core.models import ValidationReport, label_text
from src.qcore.matrices import as_matrix, dagger, max_abs
from src.qcore.positivity import check_complete_positivity

logger = logging.getLogger(__name__)


def _as_tuple(label: Hashable) -> tuple:
    return label if isinstance(label, tuple) else (label,)


@dataclass(frozen=True, eq=False)
class Instrument:
    """
    Outcome-indexed Kraus family.

    Attributes:
        outcomes: Ordered distinct outcome labels (the set V)
        kraus: Array of shape (len(outcomes), d_out, d_in)
        weights: Positive weight μ_v per outcome
    """

    outcomes: tuple[Hashable, ...]
    kraus: np.ndarray
    weights: np.ndarray
    tol: Tolerances = field(default=DEFAULT, repr=False)

    def __post_init__(self) -> None:
        outcomes = tuple(self.outcomes)
        if len(set(outcomes)) != len(outcomes):
            raise ValueError(f"Outcome labels must be distinct: {outcomes}")
        kraus = np.array(self.kraus, dtype=np.complex128)
        if kraus.ndim != 3 or kraus.shape[0] != len(outcomes):
            raise DimensionError(
                f"Expected {len(outcomes)} Kraus matrices, got array of shape {kraus.shape}"
            )
        weights = np.array(self.weights, dtype=float).reshape(-1)
        if weights.shape[0] != len(outcomes):
            raise DimensionError(f"Expected {len(outcomes)} weights, got {weights.shape[0]}")
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise ValueError("Outcome weights must be positive and finite")
        if not np.all(np.isfinite(kraus)):
            raise ValueError("Kraus matrices have non-finite entries")
        kraus.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "kraus", kraus)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_kraus(
        cls,
        kraus: Sequence[np.ndarray],
        outcomes: Sequence[Hashable] | None = None,
        weights: Sequence[float] | None = None,
        tol: Tolerances = DEFAULT,
    ) -> Instrument:
        """Build an instrument from a list of Kraus matrices (labels default to 0..n-1)."""
        matrices = [as_matrix(f, f"Kraus operator {i}") for i, f in enumerate(kraus)]
        shapes = {f.shape for f in matrices}
        if len(shapes) != 1:
            raise DimensionError(f"Kraus operators must share dimensions, got {sorted(shapes)}")
        if outcomes is None:
            outcomes = range(len(matrices))
        if weights is None:
            weights = np.ones(len(matrices))
        return cls(tuple(outcomes), np.stack(matrices), np.asarray(weights, dtype=float), tol)

    @classmethod
    def identity(cls, dim: int, label: Hashable = 0, tol: Tolerances = DEFAULT) -> Instrument:
        """Single-outcome instrument {I}."""
        return cls((label,), np.eye(dim, dtype=np.complex128)[None], np.ones(1), tol)

    @property
    def d_in(self) -> int:
        """Input dimension."""
        return self.kraus.shape[2]

    @property
    def d_out(self) -> int:
        """Output dimension."""
        return self.kraus.shape[1]

    def index(self, label: Hashable) -> int:
        """Position of an outcome label; KeyError if absent."""
        try:
            return self.outcomes.index(label)
        except ValueError:
            raise KeyError(f"Unknown outcome {label!r}; outcomes are {self.outcomes}") from None

    def operator(self, label: Hashable) -> np.ndarray:
        """Kraus matrix F_v."""
        return self.kraus[self.index(label)]

    def weighted_kraus(self) -> np.ndarray:
        """√μ_v·F_v stacked, the Kraus family of the a priori channel."""
        return self.kraus * np.sqrt(self.weights)[:, None, None]

    def normalization_residual(self) -> float:
        """‖Σ_v μ_v F_v†F_v − I‖_max."""
        effects = np.einsum("v,vki,vkj->ij", self.weights, self.kraus.conj(), self.kraus)
        return max_abs(effects - np.eye(self.d_in))


def validate_instrument(ins: Instrument) -> ValidationReport:
    """
    Validate normalization and complete positivity of an instrument.

    Never raises; failures are recorded in the report.
    """
    report = ValidationReport(subject=f"instrument[{', '.join(label_text(v) for v in ins.outcomes)}]")
    report.add_check(
        "normalization",
        residual=ins.normalization_residual(),
        tolerance=ins.tol.normalization_tolerance,
        detail="‖Σ μ_v F_v†F_v − I‖_max",
    )
    cp_report = check_complete_positivity(list(ins.weighted_kraus()), ins.tol)
    report.extend(cp_report)

    if not report.is_valid:
        logger.warning(
            "Instrument validation failed: %s",
            [f"{c.name}={c.residual:.3e}" for c in report.checks if not c.passed],
        )
    return report


def compose(first: Instrument, second: Instrument) -> Instrument:
    """
    Chronological composition: ``first`` acts, then ``second``.

    Outcomes are pairs (v, v′) in lexicographic order with ``first``'s outcome
    varying slowest, flattened into one tuple; Kraus F_(v,v′) = F′_v′·F_v and
    weights multiply.

    Raises:
        DimensionError: If first.d_out != second.d_in
    """
    if first.d_out != second.d_in:
        raise DimensionError(
            f"Cannot compose: first instrument outputs dimension {first.d_out}, "
            f"second expects {second.d_in}"
        )

    outcomes = []
    kraus = []
    weights = []
    for i, v in enumerate(first.outcomes):
        for j, w in enumerate(second.outcomes):
            outcomes.append(_as_tuple(v) + _as_tuple(w))
            kraus.append(second.kraus[j] @ first.kraus[i])
            weights.append(first.weights[i] * second.weights[j])

    return Instrument(tuple(outcomes), np.stack(kraus), np.array(weights), first.tol)


def compose_all(instruments: Sequence[Instrument]) -> Instrument:
    """Compose a chronological sequence of instruments."""
    if not instruments:
        raise ValueError("Nothing to compose")
    result = instruments[0]
    for ins in instruments[1:]:
        result = compose(result, ins)
    return result
