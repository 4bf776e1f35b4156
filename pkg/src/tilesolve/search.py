"""Vectorized enumeration kernels shared by the exhaustive and greedy solvers.

Candidate labelings are enumerated in lexicographic order over a list of
free vertices (earlier vertex = more significant digit, type index 0
first), in chunks, and scored with numpy.  The first minimizer wins,
which realizes the tie-breaking rule everywhere a full enumeration
happens.
"""

from __future__ import annotations

import os
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .cost import COST_TOLERANCE
from .model import CapacityError, SchemaError, TilingInstance

__all__ = [
    "DEFAULT_STATE_CAP",
    "STATE_CAP_ENV",
    "resolve_state_cap",
    "EncodedInstance",
    "batch_costs",
    "minimize_labelings",
]

DEFAULT_STATE_CAP = 1 << 24
STATE_CAP_ENV = "TILESOLVE_STATE_CAP"
_CHUNK = 1 << 16


def resolve_state_cap(cap: int | None = None) -> int:
    """Explicit cap if given, else the TILESOLVE_STATE_CAP env var, else 2**24."""
    if cap is not None:
        if cap < 1:
            raise SchemaError("state cap must be a positive integer")
        return cap
    env = os.environ.get(STATE_CAP_ENV)
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise SchemaError(f"{STATE_CAP_ENV} must be an integer, got {env!r}") from None
        if value < 1:
            raise SchemaError(f"{STATE_CAP_ENV} must be positive, got {value}")
        return value
    return DEFAULT_STATE_CAP


class _EncodedEdge(NamedTuple):
    eid: str
    weight: float
    parts: np.ndarray  # (k,) vertex indices
    tuples: np.ndarray  # (s, k) type indices


class EncodedInstance:
    """Integer view of an instance for numpy evaluation."""

    def __init__(self, instance: TilingInstance):
        self.instance = instance
        self.tau = instance.alphabet.tau
        self.vertices = list(instance.vertices)
        self.index = instance.vertex_index
        alphabet = instance.alphabet
        self.edges: dict[str, _EncodedEdge] = {}
        for e in instance.expressions:
            parts = np.array([self.index[v] for v in e.participants], dtype=np.int64)
            tuples = np.array(
                [[alphabet.index(t) for t in tup] for tup in e.feasible], dtype=np.int16
            )
            self.edges[e.id] = _EncodedEdge(e.id, e.weight, parts, tuples)


def _edge_mismatch_columns(
    edge: _EncodedEdge,
    columns: Mapping[int, np.ndarray],
    fixed: Mapping[int, int],
    n_rows: int,
) -> np.ndarray:
    """Min-over-tuples mismatch for one edge, given per-vertex label columns."""
    k = len(edge.parts)
    part_cols: list[np.ndarray | int] = []
    for p in edge.parts:
        col = columns.get(int(p))
        part_cols.append(col if col is not None else fixed[int(p)])
    best: np.ndarray | None = None
    for tup in edge.tuples:
        mism = np.zeros(n_rows, dtype=np.int32)
        for j in range(k):
            col = part_cols[j]
            if isinstance(col, np.ndarray):
                mism += col != tup[j]
            elif col != tup[j]:
                mism += 1
        best = mism if best is None else np.minimum(best, mism, out=best)
    assert best is not None
    return best


def batch_costs(
    instance: TilingInstance | EncodedInstance, labels: np.ndarray
) -> np.ndarray:
    """Total cost of each labeling row.

    ``labels`` has shape (R, n_vertices) holding type indices in the
    instance's vertex order.  Returns a float array of length R.
    """
    enc = instance if isinstance(instance, EncodedInstance) else EncodedInstance(instance)
    labels = np.asarray(labels)
    if labels.ndim != 2 or labels.shape[1] != len(enc.vertices):
        raise SchemaError(
            f"labels must have shape (R, {len(enc.vertices)}), got {labels.shape}"
        )
    r = labels.shape[0]
    columns = {i: labels[:, i] for i in range(labels.shape[1])}
    totals = np.zeros(r, dtype=np.float64)
    for edge in enc.edges.values():
        totals += edge.weight * _edge_mismatch_columns(edge, columns, {}, r)
    return totals


def minimize_labelings(
    enc: EncodedInstance,
    edge_ids: Iterable[str],
    fixed: Mapping[int, int],
    free: list[int],
    state_cap: int,
) -> tuple[dict[int, int], int, float]:
    """First lexicographic minimizer of the summed cost of ``edge_ids``.

    ``fixed`` maps vertex index to a pinned type index; ``free`` lists the
    vertex indices to enumerate, most significant first.  Returns (labels
    for the free vertices, number of candidate labelings enumerated, cost
    of the selected candidate).  Raises CapacityError when tau**len(free)
    exceeds ``state_cap``.
    """
    edges = [enc.edges[eid] for eid in edge_ids]
    tau = enc.tau
    n_free = len(free)
    total_states = tau**n_free
    if total_states > state_cap:
        raise CapacityError(
            f"enumeration of {tau}^{n_free} = {total_states} labelings exceeds "
            f"the state cap {state_cap}"
        )
    if n_free == 0:
        cost = 0.0
        for edge in edges:
            cost += edge.weight * float(
                _edge_mismatch_columns(edge, {}, fixed, 1)[0]
            )
        return {}, 1, cost

    free_pos = {v: j for j, v in enumerate(free)}
    places = [tau ** (n_free - 1 - j) for j in range(n_free)]
    needed: set[int] = set()
    for edge in edges:
        for p in edge.parts:
            if int(p) in free_pos:
                needed.add(int(p))

    best_cost = float("inf")
    best_index = 0
    for start in range(0, total_states, _CHUNK):
        stop = min(start + _CHUNK, total_states)
        idx = np.arange(start, stop, dtype=np.int64)
        columns = {
            v: ((idx // places[free_pos[v]]) % tau).astype(np.int16) for v in needed
        }
        totals = np.zeros(stop - start, dtype=np.float64)
        for edge in edges:
            totals += edge.weight * _edge_mismatch_columns(
                edge, columns, fixed, stop - start
            )
        chunk_min = float(totals.min())
        if chunk_min < best_cost - COST_TOLERANCE:
            local = int(np.argmax(totals <= chunk_min + COST_TOLERANCE))
            best_index = start + local
            best_cost = float(totals[local])

    labels = {
        v: (best_index // places[free_pos[v]]) % tau for v in free
    }
    return labels, total_states, best_cost
