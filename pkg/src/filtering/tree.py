"""Enumeration of reachable posterior kets under fixed per-stage controls."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Hashable, Iterator, Sequence

import numpy as np

from src.core.errors import DimensionError
from src.core.models import label_to_json, record_text
from src.core.parallel import ordered_map
from src.dynamics.hamiltonian import ControlVector
from src.dynamics.scenario import Scenario
from src.dynamics.stage import stage_instrument
from src.instrument.instrument import Instrument
from src.instrument.operations import ket_branches
from src.qcore.matrices import matrix_to_dict
from src.qcore.states import Ket

logger = logging.getLogger(__name__)


@dataclass
class PosteriorNode:
    """
    One reachable record prefix.

    Attributes:
        prefix: Outcomes observed since ``from_stage``
        state: Posterior ket after the prefix
        probability: Cumulative probability of the prefix
        children: Surviving continuations in outcome order
    """

    prefix: tuple[Hashable, ...]
    state: Ket
    probability: float
    children: list[PosteriorNode] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.prefix)

    def to_dict(self) -> dict:
        """Convert to nested dictionary for serialization."""
        return {
            "prefix": [label_to_json(v) for v in self.prefix],
            "probability": self.probability,
            "state": matrix_to_dict(self.state.amplitudes),
            "children": [child.to_dict() for child in self.children],
        }


@dataclass
class PosteriorTree:
    """Reachable posterior tree with the probability mass lost to pruning."""

    from_stage: int
    root: PosteriorNode
    pruned_mass: list[float]

    def walk(self) -> Iterator[PosteriorNode]:
        """Nodes depth-first in outcome order, root first."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list[PosteriorNode]:
        """Nodes without surviving children at the final depth."""
        depth = len(self.pruned_mass)
        return [node for node in self.walk() if node.depth == depth]

    def depth_mass(self, depth: int) -> float:
        """Σ probability of nodes at a depth plus the mass pruned up to it."""
        kept = sum(node.probability for node in self.walk() if node.depth == depth)
        return kept + sum(self.pruned_mass[:depth])

    def rows(self) -> list[list]:
        """Flat rows: record, depth, probability, amplitudes as interleaved re/im."""
        rows = []
        for node in self.walk():
            amplitudes = []
            for a in node.state.amplitudes:
                amplitudes.extend([float(a.real), float(a.imag)])
            rows.append([record_text(node.prefix), node.depth, node.probability, *amplitudes])
        return rows

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "from_stage": self.from_stage,
            "pruned_mass": list(self.pruned_mass),
            "root": self.root.to_dict(),
        }


def _expand(
    node: PosteriorNode,
    instruments: Sequence[Instrument],
    floor: float,
) -> list[float]:
    """Grow the subtree below ``node`` in place; returns pruned mass per remaining depth."""
    depth = node.depth
    pruned = [0.0] * (len(instruments) - depth)
    if depth == len(instruments):
        return pruned

    for v, p, posterior in ket_branches(instruments[depth], node.state):
        mass = node.probability * p
        if posterior is None or mass <= floor:
            pruned[0] += mass
            continue
        child = PosteriorNode(node.prefix + (v,), posterior, mass)
        node.children.append(child)
        for i, lost in enumerate(_expand(child, instruments, floor)):
            pruned[i + 1] += lost
    return pruned


def reachable_posteriors(
    scenario: Scenario,
    from_stage: int,
    state: Ket,
    controls_choice: Sequence[ControlVector],
    threads: int = 1,
) -> PosteriorTree:
    """
    Enumerate every record from ``from_stage`` to the horizon whose prefix
    probability exceeds the zero-probability floor.

    Subtrees below the first stage are expanded by ``threads`` workers; the
    node order does not depend on the schedule.

    Args:
        scenario: Scenario supplying the stages
        from_stage: First stage to expand
        state: Posterior ket at time t_from_stage
        controls_choice: One control for each stage from ``from_stage`` on
        threads: Worker count (0 = auto)

    Raises:
        DimensionError: If the number of controls does not match the stages left
    """
    remaining = scenario.horizon - from_stage
    if remaining < 0:
        raise DimensionError(f"Stage {from_stage} is past the horizon {scenario.horizon}")
    if len(controls_choice) != remaining:
        raise DimensionError(
            f"Need {remaining} controls from stage {from_stage}, got {len(controls_choice)}"
        )

    tol = scenario.tolerances
    instruments = [
        stage_instrument(scenario.hamiltonian, scenario.stages[from_stage + i], u, tol)
        for i, u in enumerate(controls_choice)
    ]
    floor = tol.zero_probability_floor
    root = PosteriorNode((), state, 1.0)
    pruned = [0.0] * remaining

    if remaining:
        for v, p, posterior in ket_branches(instruments[0], state):
            if posterior is None or p <= floor:
                pruned[0] += p
            else:
                root.children.append(PosteriorNode((v,), posterior, p))
        subtrees = ordered_map(lambda child: _expand(child, instruments, floor), root.children, threads)
        for lost in subtrees:
            for i, mass in enumerate(lost):
                pruned[i + 1] += mass

    tree = PosteriorTree(from_stage=from_stage, root=root, pruned_mass=pruned)
    total_pruned = float(np.sum(pruned))
    if total_pruned > 0:
        logger.debug("Pruned %.3e probability mass below the floor", total_pruned)
    return tree
