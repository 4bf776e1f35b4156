"""Solver behavior: exactness, dominance, the forest fast path, caps."""

import numpy as np
import pytest

from tilesolve import (
    CapacityError,
    CycleError,
    Expression,
    GreedyParams,
    Matrix,
    Program,
    RandomModelParams,
    SchemaError,
    TilingAlphabet,
    build_instance,
    fixture_instances,
    gen_random_instance,
    solve_exhaustive,
    solve_greedy,
    solve_local,
    solve_random,
    solve_transpose_forest,
    total_cost,
)

from oracles import brute_force_min

COPY = (("row", "row"), ("col", "col"))
FLIP = (("row", "col"), ("col", "row"))

# Regression costs for the bundled example programs (see fixtures.md).
EXHAUSTIVE_COST = {"linreg": 2.0, "pca3": 3.0, "powerset": 3.0, "rand1": 5.0, "rand2": 3.0}
LOCAL_COST = {"linreg": 4.0, "pca3": 3.0, "powerset": 3.0, "rand1": 9.0, "rand2": 7.0}


@pytest.fixture(scope="module")
def fixtures():
    return dict(fixture_instances())


def unary_program(*steps):
    """steps: (id, out, in, flip) tuples building a copy/transpose program."""
    names = sorted({x for s in steps for x in (s[1], s[2])})
    mats = tuple(Matrix(n, 4, 4) for n in names)
    exprs = tuple(
        Expression(i, "transpose" if flip else "copy", out, (src,), 1.0,
                   FLIP if flip else COPY)
        for i, out, src, flip in steps
    )
    return Program(TilingAlphabet(("row", "col")), mats, exprs)


class TestExhaustive:
    def test_matches_reference_enumeration(self):
        import math

        for seed in range(25):
            rng = np.random.default_rng([seed, 77])
            n = int(rng.integers(3, 7))
            k = int(rng.integers(2, min(3, n) + 1))
            params = RandomModelParams(
                n=n,
                m=min(int(rng.integers(1, 7)), math.comb(n, k)),
                k=k,
                tau=int(rng.integers(2, 4)),
                s=int(rng.integers(1, 4)),
                seed=seed,
            )
            inst = gen_random_instance(params)
            rep = solve_exhaustive(inst)
            assert abs(rep.cost.total - brute_force_min(inst)) < 1e-9

    def test_reported_assignment_reproduces_cost(self, fixtures):
        for name, inst in fixtures.items():
            rep = solve_exhaustive(inst)
            recomputed = total_cost(rep.assignment, inst)
            assert abs(recomputed.total - rep.cost.total) < 1e-9

    def test_fixture_regression_costs(self, fixtures):
        for name, inst in fixtures.items():
            assert solve_exhaustive(inst).cost.total == EXHAUSTIVE_COST[name]

    def test_prefers_lexicographically_first_optimum(self):
        # both labels of a lone copy edge are optimal; the scan starts at
        # all-first-type and must keep it
        prog = unary_program(("c", "B", "A", 0))
        rep = solve_exhaustive(build_instance(prog))
        assert rep.assignment.to_json() == {"A": "row", "B": "row"}


class TestLocal:
    def test_fixture_regression_costs(self, fixtures):
        for name, inst in fixtures.items():
            assert solve_local(inst).cost.total == LOCAL_COST[name]

    def test_never_beats_exhaustive(self, fixtures):
        for seed in range(20):
            inst = gen_random_instance(
                RandomModelParams(n=5, m=6, k=2, tau=2, s=2, seed=seed)
            )
            assert (
                solve_local(inst).cost.total
                >= solve_exhaustive(inst).cost.total - 1e-9
            )

    def test_assigns_every_vertex(self, fixtures):
        for inst in fixtures.values():
            rep = solve_local(inst)
            assert set(rep.assignment.assigned) == set(inst.vertices)


class TestGreedy:
    def test_fixture_costs_match_exhaustive_at_defaults(self, fixtures):
        for name, inst in fixtures.items():
            rep = solve_greedy(inst)
            assert rep.cost.total == EXHAUSTIVE_COST[name], name

    def test_dominated_by_local_on_fixtures(self, fixtures):
        for name, inst in fixtures.items():
            assert solve_greedy(inst).cost.total <= LOCAL_COST[name]

    def test_handles_tiny_cap_without_raising(self, fixtures):
        # with the exhaustive window capped the solver must still finish
        rep = solve_greedy(
            fixtures["powerset"], GreedyParams(alpha=30), state_cap=1000
        )
        assert rep.cost.total >= EXHAUSTIVE_COST["powerset"]
        assert set(rep.assignment.assigned) == set(fixtures["powerset"].vertices)

    def test_alpha_covers_whole_instance_means_exact(self):
        # size metric counts vertices plus expressions; 6 + 5 fits in 16
        for seed in range(10):
            inst = gen_random_instance(
                RandomModelParams(n=6, m=5, k=3, tau=2, s=2, seed=seed)
            )
            rep = solve_greedy(inst, GreedyParams(alpha=16, alpha_metric="size"))
            assert abs(rep.cost.total - brute_force_min(inst)) < 1e-9
            rep2 = solve_greedy(inst, GreedyParams(alpha=64))
            assert abs(rep2.cost.total - brute_force_min(inst)) < 1e-9

    def test_report_carries_params(self, fixtures):
        params = GreedyParams(beta=2, eta=0.25)
        rep = solve_greedy(fixtures["linreg"], params)
        assert rep.params == params
        j = rep.to_json()
        assert j["params"]["beta"] == 2
        assert j["params"]["eta"] == 0.25

    def test_params_validation(self):
        with pytest.raises(SchemaError):
            GreedyParams(alpha=0)
        with pytest.raises(SchemaError):
            GreedyParams(beta=0)
        with pytest.raises(SchemaError):
            GreedyParams(eta=1.5)
        with pytest.raises(SchemaError):
            GreedyParams(alpha_metric="nonsense")


class TestRandom:
    def test_same_seed_same_answer(self, fixtures):
        inst = fixtures["pca3"]
        a = solve_random(inst, seed=5)
        b = solve_random(inst, seed=5)
        assert a.assignment == b.assignment
        assert a.cost.total == b.cost.total

    def test_covers_all_vertices_and_never_beats_exhaustive(self, fixtures):
        for name, inst in fixtures.items():
            rep = solve_random(inst, seed=1)
            assert set(rep.assignment.assigned) == set(inst.vertices)
            assert rep.cost.total >= EXHAUSTIVE_COST[name] - 1e-9


class TestForest:
    def test_transpose_chain(self):
        prog = unary_program(
            ("t1", "B", "A", 1), ("c1", "C", "B", 0), ("t2", "D", "C", 1)
        )
        rep = solve_transpose_forest(prog)
        assert rep.cost.total == 0.0
        assert rep.assignment.to_json() == {
            "A": "row",
            "B": "col",
            "C": "col",
            "D": "row",
        }
        # one state per matrix plus one per expression
        assert rep.states_examined == 4 + 3

    def test_two_trees_and_an_isolated_matrix(self):
        prog = unary_program(("t", "B", "A", 1), ("c", "D", "C", 0))
        mats = prog.matrices + (Matrix("Z", 4, 4),)
        prog = Program(prog.alphabet, mats, prog.expressions)
        rep = solve_transpose_forest(prog)
        got = rep.assignment.to_json()
        assert rep.cost.total == 0.0
        assert got["Z"] == "row" and got["C"] == got["D"]
        assert rep.states_examined == 5 + 2

    def test_agrees_with_exhaustive_on_random_forests(self):
        from tilesolve import random_transpose_forest

        for seed in range(15):
            prog = random_transpose_forest(10, seed=seed)
            fast = solve_transpose_forest(prog)
            slow = solve_exhaustive(build_instance(prog))
            assert fast.cost.total == slow.cost.total == 0.0

    def test_rejects_binary_expressions(self):
        e = Expression("m", "mul", "C", ("A", "B"), 1.0, (("row", "row", "col"),))
        prog = Program(
            TilingAlphabet(("row", "col")),
            tuple(Matrix(x, 4, 4) for x in "ABC"),
            (e,),
        )
        with pytest.raises(SchemaError, match="unary"):
            solve_transpose_forest(prog)

    def test_rejects_three_type_alphabet(self):
        alpha = TilingAlphabet(("row", "col", "block"))
        e = Expression(
            "c", "copy", "B", ("A",), 1.0,
            (("row", "row"), ("col", "col"), ("block", "block")),
        )
        prog = Program(alpha, (Matrix("A", 4, 4), Matrix("B", 4, 4)), (e,))
        with pytest.raises(SchemaError, match="two tiling types"):
            solve_transpose_forest(prog)

    def test_rejects_cycles(self):
        prog = unary_program(("c1", "B", "A", 0), ("c2", "A", "B", 0))
        with pytest.raises(CycleError):
            solve_transpose_forest(prog)

    def test_rejects_mixed_feasible_pairs(self):
        e = Expression("c", "copy", "B", ("A",), 1.0, (("row", "row"), ("row", "col")))
        prog = Program(
            TilingAlphabet(("row", "col")),
            (Matrix("A", 4, 4), Matrix("B", 4, 4)),
            (e,),
        )
        with pytest.raises(SchemaError, match="feasible"):
            solve_transpose_forest(prog)


class TestCaps:
    def test_exhaustive_respects_explicit_cap(self, fixtures):
        with pytest.raises(CapacityError, match="state cap"):
            solve_exhaustive(fixtures["powerset"], state_cap=1000)

    def test_env_cap_applies(self, fixtures, monkeypatch):
        monkeypatch.setenv("TILESOLVE_STATE_CAP", "1000")
        with pytest.raises(CapacityError):
            solve_exhaustive(fixtures["powerset"])

    def test_explicit_cap_wins_over_env(self, fixtures, monkeypatch):
        monkeypatch.setenv("TILESOLVE_STATE_CAP", "1000")
        rep = solve_exhaustive(fixtures["powerset"], state_cap=1 << 22)
        assert rep.cost.total == EXHAUSTIVE_COST["powerset"]

    def test_bad_env_value_is_reported(self, monkeypatch):
        from tilesolve import resolve_state_cap

        monkeypatch.setenv("TILESOLVE_STATE_CAP", "bogus")
        with pytest.raises(SchemaError, match="TILESOLVE_STATE_CAP"):
            resolve_state_cap()


def test_report_json_shape(fixtures):
    rep = solve_exhaustive(fixtures["linreg"])
    j = rep.to_json()
    assert set(j) == {"solver", "cost", "assignment", "elapsed_s", "states", "params"}
    assert j["solver"] == "exhaustive"
    assert j["states"] > 0
    assert j["elapsed_s"] >= 0.0
    assert j["params"] is None
    assert set(j["cost"]) == {"total", "edges"}
