"""Solvers for the tiling-assignment problem.

Five strategies share one report format:

- ``solve_local``: one topological pass, each expression grabs its best
  tuple given what is already pinned.  Fast, no lookahead.
- ``solve_exhaustive``: per-component full enumeration, first
  lexicographic minimizer.  Exact, capped.
- ``solve_random``: uniform assignment from a seed, the baseline.
- ``solve_greedy``: bucketed look-ahead search; components small enough
  to enumerate are solved exactly, the rest iteratively tile the most
  expensive remaining expressions (by downstream-aware priority) a
  bucket at a time.
- ``solve_transpose_forest``: linear-time exact solver for two-type
  copy/transpose programs whose matrices form a forest.

All solvers except ``solve_random`` are pure functions of (instance,
params).  ``states_examined`` counts candidate labelings evaluated:
full enumerations count their whole space, the local pass counts
tuples inspected, the forest solver counts vertices plus expressions.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass
from typing import Any, Mapping

from .cost import COST_TOLERANCE, CostBreakdown, edge_cost, total_cost
from .model import (
    CapacityError,
    CycleError,
    Program,
    SchemaError,
    TilingAssignment,
    TilingInstance,
    build_instance,
    connected_components,
)
from .search import EncodedInstance, minimize_labelings, resolve_state_cap

import numpy as np

__all__ = [
    "GreedyParams",
    "SolveReport",
    "solve_local",
    "solve_exhaustive",
    "solve_random",
    "solve_greedy",
    "solve_transpose_forest",
]


@dataclass(frozen=True)
class GreedyParams:
    """Knobs for the greedy solver.

    alpha bounds the exhaustive fallback per component; its meaning is
    picked by alpha_metric: "search_space" compares tau**|vertices|
    against alpha, "size" compares |vertices| + |expressions|.  beta is
    the bucket capacity, eta in [0, 1] the priority cutoff: a bucket
    extends only over expressions whose priority is at least eta times
    the current maximum.  seed is carried for provenance; the algorithm
    itself is deterministic.
    """

    alpha: int = 10
    beta: int = 3
    eta: float = 0.5
    seed: int = 0
    alpha_metric: str = "search_space"

    def __post_init__(self) -> None:
        if isinstance(self.alpha, bool) or not isinstance(self.alpha, int) or self.alpha < 1:
            raise SchemaError("alpha must be a positive integer")
        if isinstance(self.beta, bool) or not isinstance(self.beta, int) or self.beta < 1:
            raise SchemaError("beta must be a positive integer")
        if not isinstance(self.eta, (int, float)) or not 0.0 <= float(self.eta) <= 1.0:
            raise SchemaError("eta must lie in [0, 1]")
        object.__setattr__(self, "eta", float(self.eta))
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise SchemaError("seed must be a non-negative integer")
        if self.alpha_metric not in ("search_space", "size"):
            raise SchemaError("alpha_metric must be 'search_space' or 'size'")

    def to_json(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "eta": self.eta,
            "seed": self.seed,
            "alpha_metric": self.alpha_metric,
        }


@dataclass
class SolveReport:
    solver: str
    assignment: TilingAssignment
    cost: CostBreakdown
    elapsed: float
    states_examined: int
    params: GreedyParams | None = None

    def to_json(self) -> dict[str, Any]:
        return {
            "solver": self.solver,
            "cost": self.cost.to_json(),
            "assignment": self.assignment.to_json(),
            "elapsed_s": self.elapsed,
            "states": self.states_examined,
            "params": self.params.to_json() if self.params is not None else None,
        }


def _report(
    solver: str,
    instance: TilingInstance,
    labels: Mapping[str, str],
    started: float,
    states: int,
    params: GreedyParams | None = None,
) -> SolveReport:
    assignment = TilingAssignment(dict(labels))
    breakdown = total_cost(assignment, instance)
    return SolveReport(
        solver=solver,
        assignment=assignment,
        cost=breakdown,
        elapsed=time.perf_counter() - started,
        states_examined=states,
        params=params,
    )


def _topological_expression_order(instance: TilingInstance) -> list[str]:
    """Topological order of expressions, program order among the ready."""
    pos = {e.id: i for i, e in enumerate(instance.expressions)}
    indeg = {eid: len(ps) for eid, ps in instance.edge_deps.items()}
    ready = [pos[eid] for eid, d in indeg.items() if d == 0]
    heapq.heapify(ready)
    order: list[str] = []
    exprs = instance.expressions
    while ready:
        eid = exprs[heapq.heappop(ready)].id
        order.append(eid)
        for f in instance.covers[eid]:
            indeg[f] -= 1
            if indeg[f] == 0:
                heapq.heappush(ready, pos[f])
    return order


def solve_local(instance: TilingInstance) -> SolveReport:
    """One pass in dependency order; each expression takes its cheapest
    tuple against what is already assigned (ties to the lowest index) and
    pins its still-free participants accordingly.  Vertices untouched by
    any expression get type 0."""
    started = time.perf_counter()
    assigned: dict[str, str] = {}
    states = 0
    for eid in _topological_expression_order(instance):
        e = instance.expression(eid)
        best_i = 0
        best_m: int | None = None
        for i, tup in enumerate(e.feasible):
            m = 0
            for v, t in zip(e.participants, tup):
                got = assigned.get(v)
                if got is not None and got != t:
                    m += 1
            if best_m is None or m < best_m:
                best_i, best_m = i, m
        states += len(e.feasible)
        for v, t in zip(e.participants, e.feasible[best_i]):
            assigned.setdefault(v, t)
    default = instance.alphabet.types[0]
    for v in instance.vertices:
        assigned.setdefault(v, default)
    return _report("local", instance, assigned, started, states)


def solve_exhaustive(instance: TilingInstance, state_cap: int | None = None) -> SolveReport:
    """Exact optimum by full enumeration, independently per connected
    component (costs decompose over components).

    Each component enumerates tau**|vertices| assignments in
    lexicographic order (component vertex order, type index order) and
    keeps the first minimizer.  Refuses with CapacityError when a
    component's space exceeds the cap (parameter, else the
    TILESOLVE_STATE_CAP env var, else 2**24).
    """
    started = time.perf_counter()
    cap = resolve_state_cap(state_cap)
    labels: dict[str, str] = {}
    states = 0
    types = instance.alphabet.types
    for comp in connected_components(instance):
        enc = EncodedInstance(comp)
        free = [enc.index[v] for v in comp.vertices]
        try:
            found, n_states, _ = minimize_labelings(
                enc, [e.id for e in comp.expressions], {}, free, cap
            )
        except CapacityError as exc:
            preview = ", ".join(comp.vertices[:6])
            if len(comp.vertices) > 6:
                preview += ", ..."
            raise CapacityError(
                f"component of {len(comp.vertices)} vertices ({preview}) is too large "
                f"to enumerate: {exc}"
            ) from None
        states += n_states
        for vi, li in found.items():
            labels[comp.vertices[vi]] = types[li]
    return _report("exhaustive", instance, labels, started, states)


def solve_random(instance: TilingInstance, seed: int = 0) -> SolveReport:
    """Uniform independent type per vertex from a seeded generator."""
    started = time.perf_counter()
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, instance.alphabet.tau, size=len(instance.vertices))
    types = instance.alphabet.types
    labels = {v: types[int(d)] for v, d in zip(instance.vertices, draws)}
    return _report("random", instance, labels, started, states=1)


def _component_is_small(comp: TilingInstance, params: GreedyParams) -> bool:
    if params.alpha_metric == "size":
        return len(comp.vertices) + len(comp.expressions) <= params.alpha
    return comp.alphabet.tau ** len(comp.vertices) <= params.alpha


def _greedy_component(
    comp: TilingInstance, params: GreedyParams, cap: int
) -> tuple[dict[str, str], int]:
    """Bucketed greedy on one connected component.

    Repeats until every vertex is tiled: rank the remaining expressions
    by priority (own optimistic cost plus the priority of remaining
    expressions directly depending on them, computed deepest layer
    first), cut a bucket off the top, enumerate the bucket's untiled
    vertices exhaustively with everything tiled so far held fixed, merge
    the winner and drop the bucket.  When expressions run out first, the
    leftovers get type 0.
    """
    enc = EncodedInstance(comp)
    types = comp.alphabet.types
    order_index = {e.id: i for i, e in enumerate(comp.expressions)}
    layer_index = comp.layer_index
    expr_by_id = {e.id: e for e in comp.expressions}
    participants = {e.id: e.participants for e in comp.expressions}

    remaining = [e.id for e in comp.expressions]
    tiled: dict[str, str] = {}
    tiled_idx: dict[int, int] = {}
    states = 0
    n_vertices = len(comp.vertices)

    while len(tiled) < n_vertices:
        if not remaining:
            for v in comp.vertices:
                tiled.setdefault(v, types[0])
            break

        remaining_set = set(remaining)
        gamma: dict[str, float] = {}
        # Deepest layers first so every remaining dependant is priced
        # before the expressions it covers.
        for eid in sorted(remaining, key=lambda x: -layer_index[x]):
            g = edge_cost(tiled, expr_by_id[eid]).cost
            for f in comp.covers[eid]:
                if f in remaining_set:
                    g += gamma[f]
            gamma[eid] = g

        ranked = sorted(remaining, key=lambda x: (-gamma[x], order_index[x]))
        g_max = gamma[ranked[0]]
        bucket: list[str] = []
        for eid in ranked:
            if len(bucket) >= params.beta:
                break
            if gamma[eid] >= params.eta * g_max - COST_TOLERANCE:
                bucket.append(eid)
            else:
                break

        bucket_vertices = {v for eid in bucket for v in participants[eid]}
        free = [
            enc.index[v] for v in comp.vertices if v in bucket_vertices and v not in tiled
        ]
        try:
            found, n_states, _ = minimize_labelings(enc, bucket, tiled_idx, free, cap)
        except CapacityError as exc:
            raise CapacityError(
                f"bucket of expressions {bucket} is too large to enumerate: {exc}"
            ) from None
        if free:
            states += n_states
        for vi, li in found.items():
            tiled[comp.vertices[vi]] = types[li]
            tiled_idx[vi] = li
        drop = set(bucket)
        remaining = [eid for eid in remaining if eid not in drop]

    return tiled, states


def solve_greedy(
    instance: TilingInstance,
    params: GreedyParams | None = None,
    state_cap: int | None = None,
) -> SolveReport:
    """Component-wise greedy: enumerate small components exactly (per
    params.alpha), run the bucketed inner loop on the rest."""
    started = time.perf_counter()
    if params is None:
        params = GreedyParams()
    cap = resolve_state_cap(state_cap)
    labels: dict[str, str] = {}
    states = 0
    types = instance.alphabet.types
    for comp in connected_components(instance):
        if _component_is_small(comp, params):
            enc = EncodedInstance(comp)
            free = [enc.index[v] for v in comp.vertices]
            found, n_states, _ = minimize_labelings(
                enc, [e.id for e in comp.expressions], {}, free, cap
            )
            states += n_states
            for vi, li in found.items():
                labels[comp.vertices[vi]] = types[li]
        else:
            tiled, n_states = _greedy_component(comp, params, cap)
            states += n_states
            labels.update(tiled)
    return _report("greedy", instance, labels, started, states, params=params)


def _classify_pair_feasible(edge, alphabet) -> int:
    """0 for a same-type constraint, 1 for a flipped one; SchemaError otherwise."""
    t0, t1 = alphabet.types
    fs = {tuple(t) for t in edge.feasible}
    if fs == {(t0, t0), (t1, t1)}:
        return 0
    if fs == {(t0, t1), (t1, t0)}:
        return 1
    raise SchemaError(
        f"expression {edge.id!r}: feasible set is neither the same-type nor the "
        f"flipped-type pair over the two-type alphabet"
    )


def solve_transpose_forest(program: Program) -> SolveReport:
    """Exact zero-cost solver for two-type copy/transpose forests.

    Every expression must be unary with the same-type feasible pair
    (copy) or the flipped pair (transpose), and the expressions' matrix
    pairs must form a forest.  Each tree is rooted at its smallest
    matrix id, the root gets type 0, and types propagate outward
    (equal across copies, flipped across transposes), which satisfies
    every expression exactly.  Work is linear: states_examined is the
    number of matrices plus the number of expressions.
    """
    started = time.perf_counter()
    alphabet = program.alphabet
    if alphabet.tau != 2:
        raise SchemaError(
            f"the forest solver needs exactly two tiling types, got {alphabet.tau}"
        )
    instance = build_instance(program)

    ids = list(program.matrix_ids)
    index = {v: i for i, v in enumerate(ids)}
    parent = list(range(len(ids)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    adjacency: dict[str, list[tuple[str, int]]] = {v: [] for v in ids}
    for e in program.expressions:
        if len(e.inputs) != 1:
            raise SchemaError(
                f"expression {e.id!r}: the forest solver handles unary expressions "
                f"only, got {len(e.inputs)} inputs"
            )
        flip = _classify_pair_feasible(e, alphabet)
        u, v = e.out, e.inputs[0]
        ru, rv = find(index[u]), find(index[v])
        if ru == rv:
            raise CycleError(
                f"expressions do not form a forest: adding {e.id!r} ({u} ~ {v}) "
                f"closes a cycle"
            )
        parent[rv] = ru
        adjacency[u].append((v, flip))
        adjacency[v].append((u, flip))

    labels: dict[str, str] = {}
    for root in sorted(ids):
        if root in labels:
            continue
        labels[root] = alphabet.types[0]
        stack = [(root, 0)]
        while stack:
            node, t = stack.pop()
            for nbr, flip in adjacency[node]:
                if nbr not in labels:
                    nt = t ^ flip
                    labels[nbr] = alphabet.types[nt]
                    stack.append((nbr, nt))

    states = len(ids) + len(program.expressions)
    return _report("forest", instance, labels, started, states)
