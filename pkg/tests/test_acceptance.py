"""End-to-end acceptance gate.

Nine checks covering exactness, solver dominance, ensemble statistics,
the forest fast path, the signed-graph and occupancy reductions, knob
robustness, and scaling.  Numeric bounds are frozen here on purpose:
a change that moves one of them is a behavior change, not noise, and
should be reviewed as such (see fixtures.md for the pinned fixture
costs).
"""

import itertools
import math
import time

import numpy as np
import pytest

from tilesolve import (
    GreedyParams,
    PlainGraph,
    RandomModelParams,
    SignedGraph,
    build_antichain_instance,
    build_instance,
    cutwidth_bruteforce,
    cutwidth_program,
    fixture_instances,
    gen_random_instance,
    min_residency_order,
    random_signed_graph,
    random_transpose_forest,
    run_grid,
    run_histogram,
    signed_graph_program,
    solve_exhaustive,
    solve_greedy,
    solve_local,
    solve_random,
    solve_transpose_forest,
)

from oracles import bsp_bruteforce, brute_force_min, graph_representatives

# Pinned fixture costs (first derivation recorded in fixtures.md).
FIXTURE_OPTIMUM = {"linreg": 2.0, "pca3": 3.0, "powerset": 3.0, "rand1": 5.0, "rand2": 3.0}
FIXTURE_LOCAL = {"linreg": 4.0, "pca3": 3.0, "powerset": 3.0, "rand1": 9.0, "rand2": 7.0}

# Random-labeling mean over exhaustive optimum on the reduced instance
# of check 4, frozen at first measurement (observed 1.5918).
RANDOM_MEAN_RATIO_BOUND = 2.0


def small_instance(seed):
    """One member of the small ensemble used by checks 1 and 2."""
    rng = np.random.default_rng([seed, 1])
    n = int(rng.integers(4, 9))
    k = int(rng.integers(2, min(3, n) + 1))
    tau = int(rng.integers(2, 4))
    m = int(rng.integers(1, min(math.comb(n, k), 10) + 1))
    s = int(rng.integers(1, min(tau**k, 4) + 1))
    return gen_random_instance(RandomModelParams(n=n, m=m, k=k, tau=tau, s=s, seed=seed))


def test_01_exhaustive_is_exact_on_small_instances():
    started = time.perf_counter()
    for seed in range(200):
        inst = small_instance(seed)
        rep = solve_exhaustive(inst)
        want = brute_force_min(inst)
        assert abs(rep.cost.total - want) < 1e-9, seed
    assert time.perf_counter() - started < 30.0


def test_02_solver_dominance_and_fixture_optimality():
    # exhaustive never loses to greedy, anywhere
    for seed in range(200):
        inst = small_instance(seed)
        assert (
            solve_exhaustive(inst).cost.total
            <= solve_greedy(inst).cost.total + 1e-9
        ), seed
    matches = 0
    for name, inst in fixture_instances():
        ex = solve_exhaustive(inst).cost.total
        gr = solve_greedy(inst).cost.total
        lo = solve_local(inst).cost.total
        assert ex == FIXTURE_OPTIMUM[name], name
        assert lo == FIXTURE_LOCAL[name], name
        assert ex <= gr + 1e-9, name
        assert gr <= lo + 1e-9, name
        matches += gr == ex
    assert matches >= 4


def test_03_random_solver_tracks_expected_mismatch_rate():
    # one edge position matches the drawn label with probability 1/tau,
    # so a uniform labeling pays about (1 - 1/tau) * k per edge
    started = time.perf_counter()
    params = RandomModelParams(n=40, m=200, k=3, tau=2, s=1, seed=7)
    inst = gen_random_instance(params)
    expected = (1 - 1 / params.tau) * params.k * params.m
    costs = np.array(
        [solve_random(inst, seed=s).cost.total for s in range(2000)]
    )
    mean = costs.mean()
    assert abs(mean - expected) / expected < 0.05, mean
    assert (costs > 1.2 * mean).mean() < 0.01
    assert time.perf_counter() - started < 60.0


def test_04_uniform_cost_concentration_and_mean_to_optimum_ratio():
    hist = run_histogram(
        RandomModelParams(n=10, m=50, k=3, tau=3, s=3, seed=11), 10_000
    )
    assert hist.cv < 0.15, hist.cv
    # same family shrunk until exhaustive is feasible: an average labeling
    # sits within a constant factor of the optimum
    reduced = RandomModelParams(n=8, m=20, k=3, tau=3, s=3, seed=11)
    mean = run_histogram(reduced, 10_000).mean
    optimum = solve_exhaustive(gen_random_instance(reduced)).cost.total
    assert optimum > 0
    assert mean / optimum <= RANDOM_MEAN_RATIO_BOUND, mean / optimum


def test_05_forest_solver_is_exact_and_linear():
    for seed in range(100):
        rng = np.random.default_rng([seed, 9])
        n = int(rng.integers(2, 201))
        prog = random_transpose_forest(n, seed=seed)
        rep = solve_transpose_forest(prog)
        assert rep.cost.total == 0.0
        assert rep.states_examined == n + len(prog.expressions)
    # cross-check against enumeration where that is affordable
    for seed in range(20):
        rng = np.random.default_rng([seed, 10])
        n = int(rng.integers(2, 17))
        prog = random_transpose_forest(n, seed=seed + 1000)
        fast = solve_transpose_forest(prog)
        slow = solve_exhaustive(build_instance(prog))
        assert fast.cost.total == slow.cost.total == 0.0


def test_06_signed_graph_optimum_is_the_balance_minimum():
    vs = ("a", "b", "c")
    pairs = list(itertools.combinations(vs, 2))
    for combo in itertools.product((None, "=", "!="), repeat=3):
        edges = tuple((u, v, s) for (u, v), s in zip(pairs, combo) if s)
        g = SignedGraph(vs, edges)
        inst = build_antichain_instance(signed_graph_program(g))
        assert solve_exhaustive(inst).cost.total == bsp_bruteforce(g), combo
    for seed in range(50):
        rng = np.random.default_rng([seed, 3])
        n = int(rng.integers(2, 7))
        m = int(rng.integers(0, n * (n - 1) // 2 + 1))
        g = random_signed_graph(n, m, seed)
        inst = build_antichain_instance(signed_graph_program(g))
        assert solve_exhaustive(inst).cost.total == bsp_bruteforce(g), seed


def test_07_min_residency_matches_cutwidth_identity():
    started = time.perf_counter()
    reps = graph_representatives(5)
    assert len(reps) == 52
    for n, edges in reps:
        names = tuple(f"v{i}" for i in range(n))
        g = PlainGraph(names, tuple((names[u], names[v]) for u, v in edges))
        best = min_residency_order(cutwidth_program(g))
        assert best.residency == n + 1 + cutwidth_bruteforce(g), (n, edges)
    assert time.perf_counter() - started < 300.0


def test_08_greedy_is_knob_robust_on_fixtures():
    entries = fixture_instances()
    grid = run_grid(entries, beta_values=(1, 2, 4, 8), eta_values=(0.0, 0.5, 0.9))
    for name, _ in entries:
        cells = {c for row in grid.costs[name] for c in row}
        assert cells == {FIXTURE_OPTIMUM[name]}, (name, cells)
    # more exhaustive window per bucket as beta grows: states go up
    mean_states = [
        np.mean([grid.states[name][bi][ei] for name, _ in entries
                 for ei in range(3)])
        for bi in range(4)
    ]
    assert all(a <= b for a, b in zip(mean_states, mean_states[1:])), mean_states


def test_09_greedy_work_scales_gently_with_program_size():
    mean_states = []
    for m in (100, 200, 400, 800):
        per_seed = []
        for seed in range(5):
            inst = gen_random_instance(
                RandomModelParams(n=m // 5, m=m, k=3, tau=3, s=2, seed=seed)
            )
            per_seed.append(solve_greedy(inst, GreedyParams()).states_examined)
        mean_states.append(np.mean(per_seed))
    factors = [b / a for a, b in zip(mean_states, mean_states[1:])]
    assert all(f <= 2.6 for f in factors), (mean_states, factors)
