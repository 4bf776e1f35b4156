"""Cost model: per-edge minimization, tie-breaking, partial assignments."""

import itertools

import numpy as np
import pytest

from tilesolve import (
    COST_TOLERANCE,
    Expression,
    Matrix,
    Program,
    TilingAlphabet,
    batch_costs,
    build_antichain_instance,
    edge_cost,
    hamming_mismatch,
    total_cost,
)

ALPHA = TilingAlphabet(("row", "col"))


def program_of(*exprs, extra=()):
    names = sorted({x for e in exprs for x in (e.out, *e.inputs)} | set(extra))
    mats = tuple(Matrix(n, 4, 4) for n in names)
    return Program(ALPHA, mats, tuple(exprs))


def test_hamming_counts_assigned_positions_only():
    e = Expression("E", "sum", "C", ("A", "B"), 1.0, (("row", "row", "row"),))
    full = {"A": "row", "B": "col", "C": "col"}
    assert hamming_mismatch(full, e, ("row", "row", "row")) == 2
    partial = {"B": "col"}
    assert hamming_mismatch(partial, e, ("row", "row", "row")) == 1
    assert hamming_mismatch({}, e, ("row", "row", "row")) == 0


def test_edge_cost_picks_cheapest_tuple():
    e = Expression(
        "E",
        "sum",
        "C",
        ("A", "B"),
        1.0,
        (("row", "row", "row"), ("col", "col", "col")),
    )
    got = edge_cost({"A": "col", "B": "col", "C": "col"}, e)
    assert got.tuple_index == 1
    assert got.mismatch == 0
    assert got.cost == 0.0


def test_edge_cost_tie_goes_to_lowest_tuple_index():
    """Two tuples at the same mismatch count: report the earlier one."""
    e = Expression("E", "copy", "B", ("A",), 1.0, (("row", "row"), ("col", "col")))
    # (B=row, A=col) is one flip away from either tuple
    got = edge_cost({"A": "col", "B": "row"}, e)
    assert got.mismatch == 1
    assert got.tuple_index == 0
    # and the mirror labeling ties the same way
    assert edge_cost({"A": "row", "B": "col"}, e).tuple_index == 0


def test_edge_cost_scales_by_weight():
    e = Expression("E", "copy", "B", ("A",), 2.5, (("row", "row"),))
    got = edge_cost({"A": "col", "B": "row"}, e)
    assert got.mismatch == 1
    assert got.cost == 2.5


def test_repeated_matrix_counts_each_position():
    # A appears as both inputs: one label can never match a mixed tuple twice
    e = Expression("E", "mul", "B", ("A", "A"), 1.0, (("row", "row", "col"),))
    for t in ("row", "col"):
        got = edge_cost({"A": t, "B": "row"}, e)
        assert got.mismatch == 1


def test_total_cost_sums_per_edge():
    e1 = Expression("e1", "copy", "B", ("A",), 1.0, (("row", "row"), ("col", "col")))
    e2 = Expression("e2", "transpose", "C", ("B",), 3.0, (("row", "col"), ("col", "row")))
    inst = build_antichain_instance(program_of(e1, e2))
    breakdown = total_cost({"A": "row", "B": "row", "C": "row"}, inst)
    assert breakdown.per_edge["e1"].cost == 0.0
    assert breakdown.per_edge["e2"].cost == 3.0
    assert breakdown.total == 3.0
    j = breakdown.to_json()
    assert j["total"] == 3.0
    assert set(j["edges"]) == {"e1", "e2"}


def test_zero_weight_edge_contributes_nothing():
    e = Expression("E", "copy", "B", ("A",), 0.0, (("row", "row"),))
    inst = build_antichain_instance(program_of(e))
    assert total_cost({"A": "col", "B": "col"}, inst).total == 0.0


def test_batch_costs_agrees_with_scalar_path():
    """The vectorized kernel and the dict-based path see the same costs."""
    rng = np.random.default_rng(42)
    types = ("row", "col", "block")
    alpha3 = TilingAlphabet(types)
    names = [f"M{i}" for i in range(5)]
    mats = tuple(Matrix(n, 4, 4) for n in names)
    exprs = []
    for j in range(6):
        k = int(rng.integers(1, 3))
        parts = rng.choice(5, size=k + 1, replace=False)
        feas = tuple(
            tuple(types[t] for t in rng.integers(0, 3, size=k + 1))
            for _ in range(int(rng.integers(1, 4)))
        )
        exprs.append(
            Expression(
                f"e{j}",
                "op",
                names[parts[0]],
                tuple(names[p] for p in parts[1:]),
                float(rng.integers(1, 4)),
                tuple(dict.fromkeys(feas)),
            )
        )
    inst = build_antichain_instance(Program(alpha3, mats, tuple(exprs)))
    labels = rng.integers(0, 3, size=(40, 5))
    batched = batch_costs(inst, labels)
    for row, want in zip(labels, batched):
        assignment = {n: types[t] for n, t in zip(names, row)}
        assert abs(total_cost(assignment, inst).total - want) < COST_TOLERANCE


def test_exhaustive_scan_matches_itertools_reference():
    e1 = Expression("e1", "mul", "C", ("A", "B"), 1.0, (("row", "row", "col"),))
    e2 = Expression("e2", "copy", "D", ("C",), 2.0, (("row", "row"), ("col", "col")))
    inst = build_antichain_instance(program_of(e1, e2))
    names = inst.vertices
    best = min(
        total_cost(dict(zip(names, combo)), inst).total
        for combo in itertools.product(ALPHA.types, repeat=len(names))
    )
    grid = np.array(
        list(itertools.product(range(2), repeat=len(names))), dtype=np.int64
    )
    assert abs(batch_costs(inst, grid).min() - best) < COST_TOLERANCE


def test_tolerance_is_tight():
    assert COST_TOLERANCE <= 1e-9
