"""Memory occupancy of a program under a chosen execution order.

Running a program executes its expressions in some linear extension of
the dependency order.  Each matrix occupies memory over a lifespan
interval: it materializes at the first expression touching it and is
needed through its last use, or through the end of the run when it is a
declared output.  Two numbers summarize an order:

- ``kappa``: the peak number of lifespan intervals overlapping any
  single expression position (the clique number of the interval graph).
- ``residency``: the peak number of matrices that must be *held across*
  a position boundary, i.e. already materialized and still needed
  later (or an output).  This is the count of live matrices between
  steps; it never exceeds kappa.

``min_residency_order`` searches all linear extensions for the order
minimizing residency.  On programs produced by :func:`cutwidth_program`
the minimum residency equals |V| + 1 + cutwidth of the source graph,
which :func:`cutwidth_bruteforce` verifies independently on small
graphs.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Any, Sequence

from .model import (
    CapacityError,
    Expression,
    Matrix,
    Program,
    SchemaError,
    TilingAlphabet,
    TilingError,
    build_instance,
)

__all__ = [
    "PlainGraph",
    "LifespanProfile",
    "lifespan_profile",
    "canonical_order",
    "min_residency_order",
    "cutwidth_program",
    "cutwidth_bruteforce",
]

MAX_EXTENSION_STEPS = 10_000_000
MATRIX_SIDE = 100


@dataclass(frozen=True)
class PlainGraph:
    """A simple undirected graph."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if len(set(self.vertices)) != len(self.vertices):
            raise SchemaError("graph vertices must be unique")
        for v in self.vertices:
            if not isinstance(v, str) or not v:
                raise SchemaError("graph vertex names must be non-empty strings")
        known = set(self.vertices)
        seen: set[frozenset[str]] = set()
        for i, edge in enumerate(self.edges):
            if len(edge) != 2:
                raise SchemaError(f"edges[{i}]: expected (u, v)")
            u, v = edge
            if u not in known or v not in known:
                raise SchemaError(f"edges[{i}]: unknown endpoint in ({u!r}, {v!r})")
            if u == v:
                raise SchemaError(f"edges[{i}]: self-loop at {u!r}")
            key = frozenset((u, v))
            if key in seen:
                raise SchemaError(f"edges[{i}]: duplicate edge {u!r} ~ {v!r}")
            seen.add(key)


@dataclass(frozen=True)
class LifespanProfile:
    """Lifespans of all touched matrices under one execution order.

    intervals maps matrix id to its 1-based [s, t] span: s is the first
    expression position touching it, t the last use, extended to the
    final position for declared outputs.  Matrices appearing in no
    expression get no interval.
    """

    order: tuple[str, ...]
    intervals: dict[str, tuple[int, int]]
    kappa: int
    residency: int

    def to_json(self) -> dict[str, Any]:
        return {
            "order": list(self.order),
            "kappa": self.kappa,
            "residency": self.residency,
            "intervals": {m: list(self.intervals[m]) for m in sorted(self.intervals)},
        }


def _participant_sets(program: Program) -> dict[str, frozenset[str]]:
    return {e.id: frozenset(e.participants) for e in program.expressions}


def _check_extension(program: Program, order: Sequence[str]) -> dict[str, int]:
    """Validate ``order`` as a linear extension; return id -> 0-based position."""
    ids = [e.id for e in program.expressions]
    if sorted(order) != sorted(ids):
        raise TilingError(
            "order must be a permutation of the program's expression ids"
        )
    pos = {eid: i for i, eid in enumerate(order)}
    deps = build_instance(program).edge_deps
    for eid in order:
        for p in deps[eid]:
            if pos[p] > pos[eid]:
                raise TilingError(
                    f"order violates the dependency order: {p!r} must run "
                    f"before {eid!r}"
                )
    return pos


def lifespan_profile(program: Program, order: Sequence[str]) -> LifespanProfile:
    """Sweep one execution order into intervals, kappa and residency.

    ``order`` must be a linear extension of the program's dependency
    order; a violated producer/consumer pair is reported otherwise.
    """
    _check_extension(program, order)
    m = len(order)
    parts = _participant_sets(program)
    first: dict[str, int] = {}
    last: dict[str, int] = {}
    for i, eid in enumerate(order):
        p = i + 1
        for v in parts[eid]:
            first.setdefault(v, p)
            last[v] = p
    intervals: dict[str, tuple[int, int]] = {}
    for v, s in first.items():
        t = m if program.matrix(v).output else last[v]
        intervals[v] = (s, t)

    kappa = residency = 0
    if m:
        point = [0] * (m + 2)
        held = [0] * (m + 2)
        for v, (s, t) in intervals.items():
            point[s] += 1
            point[t + 1] -= 1
            # Held across boundary j (after position j) when still needed
            # at j+1 or later; outputs keep t = m and also span boundary m.
            hold_end = m if program.matrix(v).output else t - 1
            if hold_end >= s:
                held[s] += 1
                held[hold_end + 1] -= 1
        live = 0
        for i in range(1, m + 1):
            live += point[i]
            kappa = max(kappa, live)
        live = 0
        for i in range(1, m + 1):
            live += held[i]
            residency = max(residency, live)
    return LifespanProfile(tuple(order), intervals, kappa, residency)


def canonical_order(program: Program) -> list[str]:
    """Dependency-respecting order taking the smallest program index first.

    Program order itself need not respect the dependency order (an
    expression may read a matrix that a textually later expression
    produces), so this is the default order for lifespan reports.
    """
    deps = build_instance(program).edge_deps
    exprs = program.expressions
    pos = {e.id: i for i, e in enumerate(exprs)}
    indeg = {eid: len(ps) for eid, ps in deps.items()}
    covers: dict[str, list[str]] = {e.id: [] for e in exprs}
    for eid, ps in deps.items():
        for p in ps:
            covers[p].append(eid)
    ready = [pos[eid] for eid, d in indeg.items() if d == 0]
    heapq.heapify(ready)
    out: list[str] = []
    while ready:
        eid = exprs[heapq.heappop(ready)].id
        out.append(eid)
        for f in covers[eid]:
            indeg[f] -= 1
            if indeg[f] == 0:
                heapq.heappush(ready, pos[f])
    return out


def min_residency_order(
    program: Program,
    cap: int | None = None,
    max_extensions: int = MAX_EXTENSION_STEPS,
) -> LifespanProfile:
    """Search all linear extensions for the minimum-residency order.

    Depth-first over the extension poset with an incremental live count
    and prefix-max pruning; among minimizers the first in search order
    (ready expressions tried by program index) wins.  With ``cap``
    given, the first order whose residency is <= cap is returned
    immediately.  Raises CapacityError after ``max_extensions`` search
    steps; desk-scale posets stay far below the default guard.
    """
    exprs = program.expressions
    m = len(exprs)
    if m == 0:
        return LifespanProfile((), {}, 0, 0)

    inst = build_instance(program)
    deps = inst.edge_deps
    pos = {e.id: i for i, e in enumerate(exprs)}
    covers: dict[str, list[str]] = {e.id: [] for e in exprs}
    for eid, ps in deps.items():
        for p in ps:
            covers[p].append(eid)
    parts = {e.id: sorted(frozenset(e.participants)) for e in exprs}
    is_output = {mat.id: mat.output for mat in program.matrices}

    # Seed the bound with the canonical order so pruning bites early.
    seed_order = canonical_order(program)
    best_profile = lifespan_profile(program, seed_order)
    if cap is not None and best_profile.residency <= cap:
        return best_profile
    best = best_profile.residency
    best_order: list[str] | None = None

    remaining_uses: dict[str, int] = {}
    for eid in pos:
        for v in parts[eid]:
            remaining_uses[v] = remaining_uses.get(v, 0) + 1
    appeared: set[str] = set()
    indeg = {eid: len(ps) for eid, ps in deps.items()}
    prefix: list[str] = []
    steps = 0

    def place(eid: str) -> tuple[int, list[str]]:
        """Apply eid; return (live delta, matrices newly appeared)."""
        delta = 0
        fresh: list[str] = []
        for v in parts[eid]:
            was_new = v not in appeared
            if was_new:
                appeared.add(v)
                fresh.append(v)
            remaining_uses[v] -= 1
            alive_now = is_output[v] or remaining_uses[v] > 0
            if was_new:
                delta += alive_now
            elif not alive_now:
                delta -= 1
        return delta, fresh

    def unplace(eid: str, fresh: list[str]) -> None:
        for v in parts[eid]:
            remaining_uses[v] += 1
        for v in fresh:
            appeared.remove(v)

    def dfs(alive: int, prefix_max: int, ready: list[str]) -> bool:
        """Returns True to abort the whole search (cap satisfied)."""
        nonlocal best, best_order, steps
        if len(prefix) == m:
            if prefix_max < best:
                best = prefix_max
                best_order = list(prefix)
                if cap is not None and best <= cap:
                    return True
            return False
        for eid in ready:
            steps += 1
            if steps > max_extensions:
                raise CapacityError(
                    f"linear-extension search exceeded {max_extensions} steps; "
                    f"the dependency order admits too many extensions"
                )
            delta, fresh = place(eid)
            new_alive = alive + delta
            new_max = max(prefix_max, new_alive)
            if new_max < best:
                prefix.append(eid)
                opened = []
                for f in covers[eid]:
                    indeg[f] -= 1
                    if indeg[f] == 0:
                        opened.append(f)
                next_ready = sorted(
                    [x for x in ready if x != eid] + opened, key=pos.__getitem__
                )
                done = dfs(new_alive, new_max, next_ready)
                for f in covers[eid]:
                    indeg[f] += 1
                prefix.pop()
                if done:
                    return True
            unplace(eid, fresh)
        return False

    initial_ready = sorted((eid for eid, d in indeg.items() if d == 0), key=pos.__getitem__)
    dfs(0, 0, initial_ready)
    if best_order is None:
        return best_profile
    return lifespan_profile(program, best_order)


# ---------------------------------------------------------------------------
# Cutwidth reduction


def cutwidth_program(graph: PlainGraph) -> Program:
    """Program whose minimum residency is |V| + 1 + cutwidth(graph).

    Per graph vertex v there is an input C_v and a produced A_v; per
    edge {u, v} an input B_u_v read by both endpoint expressions.  A
    shared matrix Ainit (read by every vertex expression) forces the
    vertex expressions between the first and last steps, and the single
    output Afin collects every A_v.  Executing the vertex expressions in
    the order R holds, between consecutive steps, Ainit, one of {A_v,
    C_v} per vertex, and the B matrices of edges crossing the current
    position of R; minimizing over linear extensions therefore minimizes
    the maximum edge cut of a vertex ordering.
    """
    index = {v: i for i, v in enumerate(graph.vertices)}
    incident: dict[str, list[str]] = {v: [] for v in graph.vertices}
    edge_ids: list[str] = []
    for u, v in graph.edges:
        a, b = sorted((u, v), key=index.__getitem__)
        b_id = f"B_{a}_{b}"
        edge_ids.append(b_id)
        incident[a].append(b_id)
        incident[b].append(b_id)

    matrices = [Matrix(f"C_{v}", MATRIX_SIDE, MATRIX_SIDE) for v in graph.vertices]
    matrices += [Matrix(b_id, MATRIX_SIDE, MATRIX_SIDE) for b_id in edge_ids]
    matrices.append(Matrix("Ainit", MATRIX_SIDE, MATRIX_SIDE))
    matrices += [Matrix(f"A_{v}", MATRIX_SIDE, MATRIX_SIDE) for v in graph.vertices]
    matrices.append(Matrix("Afin", MATRIX_SIDE, MATRIX_SIDE, output=True))

    alphabet = TilingAlphabet(("row",))

    def expr(eid: str, out: str, inputs: tuple[str, ...]) -> Expression:
        return Expression(
            id=eid,
            op="hold",
            out=out,
            inputs=inputs,
            weight=1.0,
            feasible=(("row",) * (1 + len(inputs)),),
        )

    expressions = [
        expr("e_init", "Ainit", tuple(f"C_{v}" for v in graph.vertices))
    ]
    for v in graph.vertices:
        expressions.append(
            expr(f"ev_{v}", f"A_{v}", tuple(incident[v]) + (f"C_{v}", "Ainit"))
        )
    expressions.append(
        expr("e_fin", "Afin", tuple(f"A_{v}" for v in graph.vertices) + ("Ainit",))
    )
    return Program(alphabet, tuple(matrices), tuple(expressions))


def cutwidth_bruteforce(graph: PlainGraph) -> int:
    """Minimum over vertex orderings of the maximum crossing-edge count.

    An edge whose endpoints sit at positions l < r crosses gap i for
    l <= i <= r-1.  Branch-and-bound over orderings; refuses beyond 10
    vertices.
    """
    n = len(graph.vertices)
    if n > 10:
        raise CapacityError(
            f"cutwidth_bruteforce handles at most 10 vertices, got {n}"
        )
    if n == 0 or not graph.edges:
        return 0
    index = {v: i for i, v in enumerate(graph.vertices)}
    adjacency: list[set[int]] = [set() for _ in range(n)]
    for u, v in graph.edges:
        adjacency[index[u]].add(index[v])
        adjacency[index[v]].add(index[u])

    best = len(graph.edges)
    placed: list[int] = []
    in_prefix = [False] * n

    def dfs(cut: int, prefix_max: int) -> None:
        nonlocal best
        if len(placed) == n:
            best = min(best, prefix_max)
            return
        for v in range(n):
            if in_prefix[v]:
                continue
            # Edges from v into the prefix stop crossing; the rest start.
            back = sum(1 for u in adjacency[v] if in_prefix[u])
            new_cut = cut - back + (len(adjacency[v]) - back)
            new_max = max(prefix_max, new_cut)
            if new_max >= best:
                continue
            in_prefix[v] = True
            placed.append(v)
            dfs(new_cut, new_max)
            placed.pop()
            in_prefix[v] = False

    dfs(0, 0)
    return best
