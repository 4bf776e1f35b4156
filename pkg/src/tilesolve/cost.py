"""Retiling-cost evaluation.

An expression's cost under an assignment is its weight times the best
Hamming agreement over its feasible tuples: for each tuple, every
participant position whose assigned type differs from the tuple's type
counts one retiling.  Unassigned positions count zero, so partial
assignments price an edge at the optimistic minimum over completions.
Shared matrices are charged once per expression touching them, by
design: each expression retiles its own operands.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, NamedTuple

from .model import Expression, SchemaError, TilingAssignment, TilingError, TilingInstance

__all__ = [
    "COST_TOLERANCE",
    "EdgeCost",
    "CostBreakdown",
    "hamming_mismatch",
    "edge_cost",
    "total_cost",
]

# Comparisons of weighted costs use this absolute tolerance.  With
# integer weights all costs are exactly representable and differences
# are >= 1, so the tolerance only matters for fractional weights.
COST_TOLERANCE = 1e-9


class EdgeCost(NamedTuple):
    tuple_index: int
    mismatch: int
    cost: float


def _as_mapping(assignment: TilingAssignment | Mapping[str, str]) -> Mapping[str, str]:
    if isinstance(assignment, TilingAssignment):
        return assignment.assigned
    return assignment


def hamming_mismatch(
    assignment: TilingAssignment | Mapping[str, str],
    edge: Expression,
    tile_tuple: tuple[str, ...],
) -> int:
    """Number of assigned positions of ``edge`` disagreeing with ``tile_tuple``."""
    if len(tile_tuple) != edge.arity:
        raise SchemaError(
            f"expression {edge.id!r}: tuple arity {len(tile_tuple)} does not match "
            f"edge arity {edge.arity}"
        )
    assigned = _as_mapping(assignment)
    n = 0
    for v, t in zip(edge.participants, tile_tuple):
        got = assigned.get(v)
        if got is not None and got != t:
            n += 1
    return n


def edge_cost(
    assignment: TilingAssignment | Mapping[str, str], edge: Expression
) -> EdgeCost:
    """Weighted minimum mismatch over the edge's feasible tuples.

    Ties resolve to the lowest tuple index.  Under a partial assignment
    this is the optimistic bound: the minimum over all completions.
    """
    assigned = _as_mapping(assignment)
    parts = edge.participants
    best_i = 0
    best_m: int | None = None
    for i, tup in enumerate(edge.feasible):
        m = 0
        for v, t in zip(parts, tup):
            got = assigned.get(v)
            if got is not None and got != t:
                m += 1
        if best_m is None or m < best_m:
            best_i, best_m = i, m
            if m == 0:
                break
    assert best_m is not None
    return EdgeCost(best_i, best_m, edge.weight * best_m)


@dataclass
class CostBreakdown:
    """Total cost plus the chosen tuple and mismatch count per edge."""

    total: float
    per_edge: dict[str, EdgeCost]

    def to_json(self) -> dict[str, Any]:
        return {
            "total": self.total,
            "edges": {
                eid: {"tuple": ec.tuple_index, "mismatch": ec.mismatch, "cost": ec.cost}
                for eid, ec in sorted(self.per_edge.items())
            },
        }


def total_cost(
    assignment: TilingAssignment | Mapping[str, str], instance: TilingInstance
) -> CostBreakdown:
    """Sum of edge costs; requires a total assignment over the instance's vertices."""
    assigned = _as_mapping(assignment)
    missing = [v for v in instance.vertices if v not in assigned]
    if missing:
        raise TilingError(
            f"assignment is not total: {len(missing)} unassigned vertex(es), "
            f"first {missing[0]!r}"
        )
    per_edge: dict[str, EdgeCost] = {}
    total = 0.0
    for e in instance.expressions:
        ec = edge_cost(assigned, e)
        per_edge[e.id] = ec
        total += ec.cost
    return CostBreakdown(total=total, per_edge=per_edge)
