"""Instance generators: random hypergraph ensembles, signed-graph
reductions, and random copy/transpose forests.

The random ensemble draws a k-uniform hypergraph on n vertices with m
distinct edges plus s feasible tuples per edge, all uniform.  Its edges
carry no dataflow (an edge just couples the matrices it touches), so
the instance is built with an empty dependency order and the program
JSON is tagged ``meta.antichain`` so loaders skip renaming and
dependency inference.

The signed-graph construction turns a balance problem into a tiling
instance by subdividing every edge: the subdivision matrix relates to
each endpoint either equal-type or flipped-type, and the optimum of the
resulting instance equals the minimum number of violated sign
constraints of the graph.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .memory import PlainGraph
from .model import (
    Expression,
    Matrix,
    Program,
    SchemaError,
    TilingAlphabet,
    TilingInstance,
    build_antichain_instance,
)

__all__ = [
    "RandomModelParams",
    "SignedGraph",
    "gen_random_instance",
    "signed_graph_program",
    "random_signed_graph",
    "random_transpose_forest",
    "random_plain_graph",
]

MATRIX_SIDE = 100

# Above this many possibilities, distinct draws switch from numpy's
# choice-without-replacement (which materializes the whole range) to
# rejection sampling.
_ENUMERATION_LIMIT = 200_000


def _check_count(name: str, value: int, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise SchemaError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return value


@dataclass(frozen=True)
class RandomModelParams:
    """Parameters of the random ensemble: n vertices, m distinct edges of
    arity k, an alphabet of tau types, s feasible tuples per edge."""

    n: int
    m: int
    k: int
    tau: int
    s: int
    seed: int = 0

    def __post_init__(self) -> None:
        _check_count("n", self.n, 1)
        _check_count("m", self.m, 0)
        _check_count("k", self.k, 1)
        _check_count("tau", self.tau, 1)
        _check_count("s", self.s, 1)
        _check_count("seed", self.seed, 0)
        if self.k > self.n:
            raise SchemaError(f"edge arity k={self.k} exceeds vertex count n={self.n}")
        if self.m > math.comb(self.n, self.k):
            raise SchemaError(
                f"m={self.m} distinct edges requested but only "
                f"C({self.n},{self.k}) = {math.comb(self.n, self.k)} exist"
            )
        if self.s > self.tau**self.k:
            raise SchemaError(
                f"s={self.s} distinct tuples requested but only tau^k = "
                f"{self.tau ** self.k} exist"
            )

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "tau": self.tau,
            "s": self.s,
            "seed": self.seed,
        }


def _distinct_draws(rng: np.random.Generator, total: int, count: int) -> list[int]:
    """``count`` distinct uniform integers from range(total), in draw order."""
    if total <= _ENUMERATION_LIMIT:
        return [int(c) for c in rng.choice(total, size=count, replace=False)]
    seen: set[int] = set()
    out: list[int] = []
    while len(out) < count:
        c = int(rng.integers(0, total))
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def _distinct_subsets(
    rng: np.random.Generator, n: int, k: int, count: int
) -> list[tuple[int, ...]]:
    """``count`` distinct k-subsets of range(n), uniform, in draw order."""
    total = math.comb(n, k)
    if total <= _ENUMERATION_LIMIT:
        combos = list(itertools.combinations(range(n), k))
        return [combos[i] for i in _distinct_draws(rng, total, count)]
    seen: set[tuple[int, ...]] = set()
    out: list[tuple[int, ...]] = []
    while len(out) < count:
        sub = tuple(sorted(int(x) for x in rng.choice(n, size=k, replace=False)))
        if sub not in seen:
            seen.add(sub)
            out.append(sub)
    return out


def _decode_tuple(code: int, k: int, types: tuple[str, ...]) -> tuple[str, ...]:
    tau = len(types)
    out = []
    for j in range(k - 1, -1, -1):
        out.append(types[(code // tau**j) % tau])
    return tuple(out)


def gen_random_instance(params: RandomModelParams) -> TilingInstance:
    """Sample one instance of the random ensemble.

    Matrices are ``M0..M{n-1}`` over types ``T0..T{tau-1}``; every edge
    gets op "rand", weight 1 and its participants in vertex order.  The
    result is an antichain instance: no dag, every edge in one layer.
    Reproducible from params.seed alone.
    """
    rng = np.random.default_rng(params.seed)
    types = tuple(f"T{i}" for i in range(params.tau))
    alphabet = TilingAlphabet(types)
    matrices = tuple(
        Matrix(f"M{i}", MATRIX_SIDE, MATRIX_SIDE) for i in range(params.n)
    )
    edges = _distinct_subsets(rng, params.n, params.k, params.m)
    expressions = []
    for j, sub in enumerate(edges):
        codes = _distinct_draws(rng, params.tau**params.k, params.s)
        feasible = tuple(_decode_tuple(c, params.k, types) for c in codes)
        names = tuple(f"M{i}" for i in sub)
        expressions.append(
            Expression(
                id=f"e{j}",
                op="rand",
                out=names[0],
                inputs=names[1:],
                weight=1.0,
                feasible=feasible,
            )
        )
    program = Program(alphabet, matrices, tuple(expressions))
    return build_antichain_instance(program)


# ---------------------------------------------------------------------------
# Signed graphs


@dataclass(frozen=True)
class SignedGraph:
    """A simple undirected graph whose edges demand equal ("=") or
    different ("!=") binary labels at their endpoints."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if len(set(self.vertices)) != len(self.vertices):
            raise SchemaError("signed graph vertices must be unique")
        for v in self.vertices:
            if not isinstance(v, str) or not v:
                raise SchemaError("signed graph vertex names must be non-empty strings")
        known = set(self.vertices)
        seen: set[frozenset[str]] = set()
        for i, edge in enumerate(self.edges):
            if len(edge) != 3:
                raise SchemaError(f"edges[{i}]: expected (u, v, sign)")
            u, v, sign = edge
            if u not in known or v not in known:
                raise SchemaError(f"edges[{i}]: unknown endpoint in ({u!r}, {v!r})")
            if u == v:
                raise SchemaError(f"edges[{i}]: self-loop at {u!r}")
            if sign not in ("=", "!="):
                raise SchemaError(f"edges[{i}]: sign must be '=' or '!=', got {sign!r}")
            key = frozenset((u, v))
            if key in seen:
                raise SchemaError(f"edges[{i}]: duplicate edge {u!r} ~ {v!r}")
            seen.add(key)


def signed_graph_program(graph: SignedGraph) -> Program:
    """Encode a signed graph as a two-type tiling program.

    Every graph edge {u, v} is subdivided by a fresh matrix tied to each
    endpoint by its own unary expression: a copy (equal type on both
    sides) or a transpose (flipped type).  An "=" edge becomes two
    copies; a "!=" edge puts the transpose on the half touching the
    lexicographically smaller endpoint and a copy on the other half.
    The subdivision point can always side with one endpoint, so a
    violated edge costs exactly 1 and the exhaustive optimum of the
    program equals the minimum number of violated sign constraints over
    all 2-colorings of the graph.

    The two halves write the same subdivision matrix, so the result is
    a constraint antichain, not a dataflow program: solve it through
    ``build_antichain_instance``.
    """
    alphabet = TilingAlphabet(("row", "col"))
    same = (("row", "row"), ("col", "col"))
    flipped = (("row", "col"), ("col", "row"))
    matrices = [Matrix(v, MATRIX_SIDE, MATRIX_SIDE) for v in graph.vertices]
    expressions = []
    for i, (u, v, sign) in enumerate(graph.edges):
        sub = f"{u}|{v}"
        matrices.append(Matrix(sub, MATRIX_SIDE, MATRIX_SIDE))
        for tag, endpoint in (("a", u), ("b", v)):
            flip = sign == "!=" and endpoint == min(u, v)
            expressions.append(
                Expression(
                    id=f"c{i}{tag}",
                    op="transpose" if flip else "copy",
                    out=sub,
                    inputs=(endpoint,),
                    weight=1.0,
                    feasible=flipped if flip else same,
                )
            )
    return Program(alphabet, tuple(matrices), tuple(expressions))


def random_signed_graph(n: int, m: int, seed: int = 0) -> SignedGraph:
    """Uniform signed graph: m distinct edges out of C(n,2), signs fair coins."""
    _check_count("n", n, 1)
    _check_count("m", m, 0)
    _check_count("seed", seed, 0)
    if m > math.comb(n, 2):
        raise SchemaError(f"m={m} edges requested but only C({n},2) = {math.comb(n, 2)} exist")
    rng = np.random.default_rng(seed)
    vertices = tuple(f"v{i}" for i in range(n))
    pairs = _distinct_subsets(rng, n, 2, m)
    signs = rng.integers(0, 2, size=m)
    edges = tuple(
        (vertices[a], vertices[b], "=" if signs[j] else "!=")
        for j, (a, b) in enumerate(pairs)
    )
    return SignedGraph(vertices, edges)


# ---------------------------------------------------------------------------
# Copy/transpose forests


_COPY = (("row", "row"), ("col", "col"))
_TRANSPOSE = (("row", "col"), ("col", "row"))


def random_transpose_forest(n: int, seed: int = 0, root_prob: float = 0.15) -> Program:
    """Random forest-shaped program of unary copy/transpose expressions.

    Matrix i > 0 either starts a fresh tree (probability root_prob) or is
    defined from a uniformly chosen earlier matrix by copy or transpose.
    Ids are zero-padded so lexicographic order equals creation order.
    """
    _check_count("n", n, 1)
    _check_count("seed", seed, 0)
    if not 0.0 <= root_prob <= 1.0:
        raise SchemaError(f"root_prob must lie in [0, 1], got {root_prob!r}")
    rng = np.random.default_rng(seed)
    width = len(str(n - 1)) if n > 1 else 1
    names = [f"A{i:0{width}d}" for i in range(n)]
    alphabet = TilingAlphabet(("row", "col"))
    matrices = tuple(Matrix(name, MATRIX_SIDE, MATRIX_SIDE) for name in names)
    expressions = []
    for i in range(1, n):
        if rng.random() < root_prob:
            continue
        parent = int(rng.integers(0, i))
        flip = bool(rng.integers(0, 2))
        expressions.append(
            Expression(
                id=f"e{len(expressions)}",
                op="transpose" if flip else "copy",
                out=names[i],
                inputs=(names[parent],),
                weight=1.0,
                feasible=_TRANSPOSE if flip else _COPY,
            )
        )
    return Program(alphabet, matrices, tuple(expressions))


def random_plain_graph(n: int, m: int, seed: int = 0) -> PlainGraph:
    """Uniform simple graph: m distinct edges out of C(n,2)."""
    _check_count("n", n, 1)
    _check_count("m", m, 0)
    _check_count("seed", seed, 0)
    if m > math.comb(n, 2):
        raise SchemaError(f"m={m} edges requested but only C({n},2) = {math.comb(n, 2)} exist")
    rng = np.random.default_rng(seed)
    vertices = tuple(f"v{i}" for i in range(n))
    pairs = _distinct_subsets(rng, n, 2, m)
    return PlainGraph(vertices, tuple((vertices[a], vertices[b]) for a, b in pairs))
