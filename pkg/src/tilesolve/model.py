"""Data model for tiling assignment over matrix-expression programs.

A program is an ordered sequence of matrix expressions such as
``A = mul(D, E)`` over a fixed, small alphabet of tiling types
("row", "col", "block", ...).  Every matrix participating in an
expression occupies one position of the expression's tiling tuples:
position 0 is the output, positions 1..k the inputs, in order.  Each
expression carries the set of tuples its implementations prefer; a
matrix whose assigned type differs from the chosen tuple at its
position must be retiled, and the solvers in this package minimize the
total (weighted) number of such retilings.

This module defines the program types, the JSON wire format, the
single-assignment renaming pass, and the derivation of the dataflow
dag, the expression dependency order and its layer decomposition.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Mapping

__all__ = [
    "TilingError",
    "SchemaError",
    "CycleError",
    "CapacityError",
    "TilingAlphabet",
    "Matrix",
    "Expression",
    "Program",
    "TilingAssignment",
    "TilingInstance",
    "parse_program",
    "load_program",
    "program_to_json",
    "program_to_json_text",
    "rename_single_assignment",
    "build_instance",
    "build_antichain_instance",
    "connected_components",
    "cover_sets",
]


class TilingError(Exception):
    """Base class for errors raised by this package."""


class SchemaError(TilingError):
    """A document or value violates the program schema."""


class CycleError(TilingError):
    """Dataflow inferred from a program is cyclic."""

    def __init__(self, message: str, cycle: tuple[str, ...] = ()):
        super().__init__(message)
        self.cycle = cycle


class CapacityError(TilingError):
    """An enumeration would exceed the configured state cap."""


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class TilingAlphabet:
    """Ordered alphabet of tiling-type names.

    The order is significant: solvers resolve ties toward earlier types,
    and "type 0" (the first entry) is the default for matrices no
    expression constrains.
    """

    types: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "types", tuple(self.types))
        if not self.types:
            raise SchemaError("tiling_types: alphabet must contain at least one type")
        for i, t in enumerate(self.types):
            if not isinstance(t, str) or not t:
                raise SchemaError(f"tiling_types[{i}]: type names must be non-empty strings")
        if len(set(self.types)) != len(self.types):
            raise SchemaError("tiling_types: type names must be unique")

    @property
    def tau(self) -> int:
        return len(self.types)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {t: i for i, t in enumerate(self.types)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SchemaError(f"unknown tiling type {name!r}") from None

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.types)


@dataclass(frozen=True)
class Matrix:
    """A named matrix. ``output=True`` marks it as a program output that
    must survive in memory to the end of the run."""

    id: str
    rows: int
    cols: int
    output: bool = False

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise SchemaError("matrix id must be a non-empty string")
        for name in ("rows", "cols"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise SchemaError(f"matrix {self.id!r}: {name} must be a positive integer")
        if not isinstance(self.output, bool):
            raise SchemaError(f"matrix {self.id!r}: output must be a boolean")


@dataclass(frozen=True)
class Expression:
    """One matrix expression.

    ``feasible`` holds the preferred tiling tuples; every tuple has one
    type name per participating matrix in the order (out, *inputs).
    Positions bind independently, so a matrix appearing twice may be
    constrained differently per position (only one can be satisfied).
    The ``op`` tag is opaque to the solvers; only ``feasible`` matters.
    """

    id: str
    op: str
    out: str
    inputs: tuple[str, ...]
    weight: float = 1.0
    feasible: tuple[tuple[str, ...], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "feasible", tuple(tuple(t) for t in self.feasible))
        if not isinstance(self.id, str) or not self.id:
            raise SchemaError("expression id must be a non-empty string")
        if not isinstance(self.op, str) or not self.op:
            raise SchemaError(f"expression {self.id!r}: op must be a non-empty string")
        if not isinstance(self.out, str) or not self.out:
            raise SchemaError(f"expression {self.id!r}: out must be a non-empty string")
        w = self.weight
        if isinstance(w, bool) or not isinstance(w, (int, float)):
            raise SchemaError(f"expression {self.id!r}: weight must be a number")
        object.__setattr__(self, "weight", float(w))
        if self.weight < 0:
            raise SchemaError(f"expression {self.id!r}: weight must be non-negative")
        if not self.feasible:
            raise SchemaError(f"expression {self.id!r}: feasible must be non-empty")
        k = self.arity
        for i, tup in enumerate(self.feasible):
            if len(tup) != k:
                raise SchemaError(
                    f"expression {self.id!r}: feasible[{i}] has arity {len(tup)}, "
                    f"expected {k} (out + {k - 1} inputs)"
                )

    @property
    def participants(self) -> tuple[str, ...]:
        return (self.out,) + self.inputs

    @property
    def arity(self) -> int:
        return 1 + len(self.inputs)


@dataclass(frozen=True)
class Program:
    """An ordered list of expressions over declared matrices."""

    alphabet: TilingAlphabet
    matrices: tuple[Matrix, ...]
    expressions: tuple[Expression, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrices", tuple(self.matrices))
        object.__setattr__(self, "expressions", tuple(self.expressions))
        ids: set[str] = set()
        for i, m in enumerate(self.matrices):
            if m.id in ids:
                raise SchemaError(f"matrices[{i}]: duplicate matrix id {m.id!r}")
            ids.add(m.id)
        eids: set[str] = set()
        for i, e in enumerate(self.expressions):
            if e.id in eids:
                raise SchemaError(f"expressions[{i}]: duplicate expression id {e.id!r}")
            eids.add(e.id)
            if e.out not in ids:
                raise SchemaError(
                    f"expressions[{i}].out: unknown matrix id {e.out!r} in expression {e.id!r}"
                )
            for j, v in enumerate(e.inputs):
                if v not in ids:
                    raise SchemaError(
                        f"expressions[{i}].in[{j}]: unknown matrix id {v!r} in expression {e.id!r}"
                    )
            for j, tup in enumerate(e.feasible):
                for p, t in enumerate(tup):
                    if t not in self.alphabet:
                        raise SchemaError(
                            f"expressions[{i}].feasible[{j}][{p}]: unknown tiling type {t!r} "
                            f"in expression {e.id!r}"
                        )

    @cached_property
    def _matrix_map(self) -> dict[str, Matrix]:
        return {m.id: m for m in self.matrices}

    @cached_property
    def _expression_map(self) -> dict[str, Expression]:
        return {e.id: e for e in self.expressions}

    def matrix(self, mid: str) -> Matrix:
        return self._matrix_map[mid]

    def expression(self, eid: str) -> Expression:
        return self._expression_map[eid]

    @property
    def matrix_ids(self) -> tuple[str, ...]:
        return tuple(m.id for m in self.matrices)

    def is_single_assignment(self) -> bool:
        outs = [e.out for e in self.expressions]
        return len(outs) == len(set(outs))


@dataclass(frozen=True)
class TilingAssignment:
    """A (possibly partial) map from matrix id to tiling-type name."""

    assigned: Mapping[str, str]

    def status(self, vertices: Iterable[str]) -> str:
        """"total" if every vertex is assigned, else "partial"."""
        return "total" if all(v in self.assigned for v in vertices) else "partial"

    def get(self, vertex: str) -> str | None:
        return self.assigned.get(vertex)

    def to_json(self) -> dict[str, str]:
        return {v: self.assigned[v] for v in sorted(self.assigned)}


@dataclass(frozen=True)
class TilingInstance:
    """A program plus its derived dependency structure.

    dag holds matrix-level arcs (A, B) meaning B's defining expression
    consumes A.  edge_deps maps each expression to the expressions it
    directly depends on (those producing one of its inputs); covers is
    the inverse map.  layers are the level sets of the dependency order:
    layer 0 holds expressions with no expression predecessor, and an
    expression sits one layer below its deepest predecessor.
    """

    program: Program
    vertices: tuple[str, ...]
    dag: tuple[tuple[str, str], ...]
    edge_deps: Mapping[str, frozenset[str]]
    covers: Mapping[str, frozenset[str]]
    layers: tuple[tuple[str, ...], ...]

    @property
    def alphabet(self) -> TilingAlphabet:
        return self.program.alphabet

    @property
    def expressions(self) -> tuple[Expression, ...]:
        return self.program.expressions

    def expression(self, eid: str) -> Expression:
        return self.program.expression(eid)

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def layer_index(self) -> dict[str, int]:
        return {eid: li for li, layer in enumerate(self.layers) for eid in layer}

    def precedes(self, eid: str, other: str) -> bool:
        """True if ``other`` transitively depends on ``eid``."""
        seen: set[str] = set()
        stack = [other]
        while stack:
            cur = stack.pop()
            for p in self.edge_deps[cur]:
                if p == eid:
                    return True
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return False


# ---------------------------------------------------------------------------
# JSON wire format

_TOP_KEYS = {"tiling_types", "matrices", "expressions", "meta"}
_MATRIX_KEYS = {"id", "rows", "cols", "output"}
_EXPR_KEYS = {"id", "op", "out", "in", "weight", "feasible"}


def _reject_unknown(obj: Mapping[str, Any], allowed: set[str], path: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise SchemaError(f"{path}: unknown field(s) {', '.join(map(repr, unknown))}")


def _require(obj: Mapping[str, Any], key: str, path: str) -> Any:
    if key not in obj:
        raise SchemaError(f"{path}.{key}: missing required field")
    return obj[key]


def load_program(text: str | bytes) -> tuple[Program, dict[str, Any]]:
    """Parse a program document, returning the program and its ``meta`` map.

    The document layout is::

        {"tiling_types": [...],
         "matrices": [{"id": ..., "rows": ..., "cols": ..., "output": false}, ...],
         "expressions": [{"id": ..., "op": ..., "out": ..., "in": [...],
                          "weight": 1.0, "feasible": [[...], ...]}, ...]}

    plus an optional top-level ``meta`` object (generator provenance such
    as seeds; ignored by the model).  Unknown fields anywhere else are
    rejected.  ``weight`` defaults to 1.0 and ``output`` to false.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("top level: expected a JSON object")
    _reject_unknown(doc, _TOP_KEYS, "top level")
    types = _require(doc, "tiling_types", "top level")
    if not isinstance(types, list):
        raise SchemaError("tiling_types: expected a list")
    alphabet = TilingAlphabet(tuple(types))

    raw_mats = _require(doc, "matrices", "top level")
    if not isinstance(raw_mats, list):
        raise SchemaError("matrices: expected a list")
    matrices = []
    for i, m in enumerate(raw_mats):
        path = f"matrices[{i}]"
        if not isinstance(m, dict):
            raise SchemaError(f"{path}: expected an object")
        _reject_unknown(m, _MATRIX_KEYS, path)
        matrices.append(
            Matrix(
                id=_require(m, "id", path),
                rows=_require(m, "rows", path),
                cols=_require(m, "cols", path),
                output=m.get("output", False),
            )
        )

    raw_exprs = _require(doc, "expressions", "top level")
    if not isinstance(raw_exprs, list):
        raise SchemaError("expressions: expected a list")
    expressions = []
    for i, e in enumerate(raw_exprs):
        path = f"expressions[{i}]"
        if not isinstance(e, dict):
            raise SchemaError(f"{path}: expected an object")
        _reject_unknown(e, _EXPR_KEYS, path)
        inputs = _require(e, "in", path)
        if not isinstance(inputs, list) or not all(isinstance(v, str) for v in inputs):
            raise SchemaError(f"{path}.in: expected a list of matrix ids")
        feasible = _require(e, "feasible", path)
        if not isinstance(feasible, list) or not all(isinstance(t, list) for t in feasible):
            raise SchemaError(f"{path}.feasible: expected a list of tiling tuples")
        expressions.append(
            Expression(
                id=_require(e, "id", path),
                op=_require(e, "op", path),
                out=_require(e, "out", path),
                inputs=tuple(inputs),
                weight=e.get("weight", 1.0),
                feasible=tuple(tuple(t) for t in feasible),
            )
        )

    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise SchemaError("meta: expected an object")
    return Program(alphabet, tuple(matrices), tuple(expressions)), meta


def parse_program(text: str | bytes) -> Program:
    """Parse a program document (see :func:`load_program`)."""
    return load_program(text)[0]


def program_to_json(program: Program, meta: Mapping[str, Any] | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "tiling_types": list(program.alphabet.types),
        "matrices": [
            {"id": m.id, "rows": m.rows, "cols": m.cols, "output": m.output}
            for m in program.matrices
        ],
        "expressions": [
            {
                "id": e.id,
                "op": e.op,
                "out": e.out,
                "in": list(e.inputs),
                "weight": e.weight,
                "feasible": [list(t) for t in e.feasible],
            }
            for e in program.expressions
        ],
    }
    if meta is not None:
        doc["meta"] = dict(meta)
    return doc


def program_to_json_text(program: Program, meta: Mapping[str, Any] | None = None) -> str:
    return json.dumps(program_to_json(program, meta), indent=2, ensure_ascii=False)


# ---------------------------------------------------------------------------
# Operations


def rename_single_assignment(program: Program) -> Program:
    """Rewrite the program so that each matrix id appears as ``out`` at most once.

    A matrix reassigned at some expression gets a fresh id there, and all
    later reads refer to the fresh id.  Reads preceding any assignment
    refer to the declared matrix; an expression's inputs always resolve
    against the versions current *before* its own output is created.
    Output flags follow the final version of each original output matrix.
    A program already in single-assignment form comes back identical.
    """
    used = {m.id for m in program.matrices}
    current: dict[str, str] = {}  # original id -> current version id
    assigned: set[str] = set()
    versions: dict[str, list[str]] = {}  # original id -> version ids beyond the first
    new_exprs: list[Expression] = []

    def fresh(base: str) -> str:
        k = 2
        while f"{base}#{k}" in used:
            k += 1
        name = f"{base}#{k}"
        used.add(name)
        return name

    for e in program.expressions:
        ins = tuple(current.get(v, v) for v in e.inputs)
        if e.out in assigned:
            out = fresh(e.out)
            versions.setdefault(e.out, []).append(out)
            current[e.out] = out
        else:
            out = e.out
            assigned.add(e.out)
        if out == e.out and ins == e.inputs:
            new_exprs.append(e)
        else:
            new_exprs.append(
                Expression(e.id, e.op, out, ins, e.weight, e.feasible)
            )

    if not versions:
        return program

    final = {base: vs[-1] for base, vs in versions.items()}
    new_mats: list[Matrix] = []
    for m in program.matrices:
        if m.id in final and m.output:
            new_mats.append(Matrix(m.id, m.rows, m.cols, False))
        else:
            new_mats.append(m)
    for m in program.matrices:
        for v in versions.get(m.id, ()):
            new_mats.append(Matrix(v, m.rows, m.cols, m.output and v == final[m.id]))
    return Program(program.alphabet, tuple(new_mats), tuple(new_exprs))


def _layers_from_deps(
    expr_ids: list[str], deps: Mapping[str, frozenset[str]]
) -> tuple[tuple[str, ...], ...]:
    """Level sets by longest-path depth; program order inside each layer."""
    depth: dict[str, int] = {}

    def visit(eid: str) -> int:
        d = depth.get(eid)
        if d is not None:
            return d
        d = max((visit(p) + 1 for p in deps[eid]), default=0)
        depth[eid] = d
        return d

    for eid in expr_ids:
        visit(eid)
    if not expr_ids:
        return ()
    n_layers = max(depth.values()) + 1
    layers: list[list[str]] = [[] for _ in range(n_layers)]
    for eid in expr_ids:
        layers[depth[eid]].append(eid)
    return tuple(tuple(layer) for layer in layers)


def _find_cycle(succ: Mapping[str, set[str]], nodes: Iterable[str]) -> tuple[str, ...]:
    color: dict[str, int] = {}
    stack: list[str] = []

    def dfs(u: str) -> tuple[str, ...] | None:
        color[u] = 1
        stack.append(u)
        for v in succ.get(u, ()):
            if color.get(v, 0) == 1:
                return tuple(stack[stack.index(v):]) + (v,)
            if color.get(v, 0) == 0:
                found = dfs(v)
                if found:
                    return found
        color[u] = 2
        stack.pop()
        return None

    for n in nodes:
        if color.get(n, 0) == 0:
            found = dfs(n)
            if found:
                return found
    return ()


def build_instance(program: Program) -> TilingInstance:
    """Derive the dataflow dag, expression dependencies and layers.

    The program must be in single-assignment form (apply
    :func:`rename_single_assignment` first).  The dag has an arc (M, N)
    iff some expression outputs N and reads M; an expression depends on
    the producers of its inputs.  Cyclic dataflow (including an
    expression reading its own output) is rejected.
    """
    seen_out: set[str] = set()
    for e in program.expressions:
        if e.out in seen_out:
            raise SchemaError(
                f"program is not in single-assignment form: matrix {e.out!r} is assigned "
                f"more than once (at expression {e.id!r}); apply rename_single_assignment first"
            )
        seen_out.add(e.out)

    producer = {e.out: e.id for e in program.expressions}
    dag_edges: list[tuple[str, str]] = []
    dag_set: set[tuple[str, str]] = set()
    succ: dict[str, set[str]] = {}
    for e in program.expressions:
        if e.out in e.inputs:
            raise CycleError(
                f"expression {e.id!r} reads its own output {e.out!r}", (e.out, e.out)
            )
        for v in e.inputs:
            arc = (v, e.out)
            if arc not in dag_set:
                dag_set.add(arc)
                dag_edges.append(arc)
                succ.setdefault(v, set()).add(e.out)

    cycle = _find_cycle(succ, [m.id for m in program.matrices])
    if cycle:
        raise CycleError(
            "cyclic dataflow through matrices: " + " -> ".join(cycle), cycle
        )

    deps: dict[str, frozenset[str]] = {}
    covers: dict[str, set[str]] = {e.id: set() for e in program.expressions}
    for e in program.expressions:
        ps = frozenset(producer[v] for v in e.inputs if v in producer)
        deps[e.id] = ps
        for p in ps:
            covers[p].add(e.id)

    expr_ids = [e.id for e in program.expressions]
    layers = _layers_from_deps(expr_ids, deps)
    return TilingInstance(
        program=program,
        vertices=program.matrix_ids,
        dag=tuple(dag_edges),
        edge_deps=deps,
        covers={k: frozenset(v) for k, v in covers.items()},
        layers=layers,
    )


def build_antichain_instance(program: Program) -> TilingInstance:
    """Instance with no dependency structure: every expression in one layer.

    Used for sampled hypergraph ensembles, where edges constrain shared
    vertices but carry no dataflow (the encoding of an edge as
    out/inputs is positional only).  The dag and the dependency order
    are empty; component decomposition still groups vertices that share
    an edge.
    """
    empty = frozenset()
    deps = {e.id: empty for e in program.expressions}
    layers = (tuple(e.id for e in program.expressions),) if program.expressions else ()
    return TilingInstance(
        program=program,
        vertices=program.matrix_ids,
        dag=(),
        edge_deps=deps,
        covers=dict(deps),
        layers=layers,
    )


def connected_components(instance: TilingInstance) -> list[TilingInstance]:
    """Split into vertex-disjoint sub-instances.

    Vertices are connected if they appear in a common expression or
    share a dag arc; a declared matrix in no expression forms a
    singleton component.  Components are ordered by first declared
    vertex; each keeps the original relative order of its matrices,
    expressions and layers.
    """
    idx = instance.vertex_index
    parent = list(range(len(instance.vertices)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for e in instance.expressions:
        first = idx[e.participants[0]]
        for v in e.participants[1:]:
            union(first, idx[v])
    for a, b in instance.dag:
        union(idx[a], idx[b])

    groups: dict[int, list[int]] = {}
    for i in range(len(instance.vertices)):
        groups.setdefault(find(i), []).append(i)
    ordered = sorted(groups.values(), key=lambda g: g[0])

    out: list[TilingInstance] = []
    for group in ordered:
        members = {instance.vertices[i] for i in group}
        mats = tuple(m for m in instance.program.matrices if m.id in members)
        exprs = tuple(e for e in instance.expressions if e.out in members)
        eids = {e.id for e in exprs}
        sub_program = Program(instance.program.alphabet, mats, exprs)
        layers = tuple(
            kept
            for layer in instance.layers
            if (kept := tuple(eid for eid in layer if eid in eids))
        )
        out.append(
            TilingInstance(
                program=sub_program,
                vertices=tuple(instance.vertices[i] for i in group),
                dag=tuple(arc for arc in instance.dag if arc[0] in members),
                edge_deps={eid: instance.edge_deps[eid] for eid in eids},
                covers={eid: instance.covers[eid] for eid in eids},
                layers=layers,
            )
        )
    return out


def cover_sets(instance: TilingInstance) -> dict[str, set[str]]:
    """Map each expression to the expressions that directly read its output."""
    return {eid: set(c) for eid, c in instance.covers.items()}
