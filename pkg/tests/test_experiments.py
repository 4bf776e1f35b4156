"""Harness outputs: comparison tables, parameter grids, cost histograms."""

import csv
import io
import math

from tilesolve import (
    GreedyParams,
    RandomModelParams,
    build_instance,
    fixture_instances,
    run_grid,
    run_histogram,
    run_solver_comparison,
)


def one_fixture():
    name, inst = fixture_instances()[0]
    return name, inst


class TestComparison:
    def test_rows_cover_three_solvers_per_program(self):
        name, inst = one_fixture()
        table = run_solver_comparison([(name, inst)], GreedyParams())
        assert [r["solver"] for r in table.rows] == ["local", "exhaustive", "greedy"]
        assert all(r["program"] == name for r in table.rows)
        costs = {r["solver"]: r["cost"] for r in table.rows}
        assert costs["exhaustive"] <= costs["greedy"] <= costs["local"]

    def test_csv_is_rfc4180(self):
        _, inst = one_fixture()
        text = run_solver_comparison([('odd,"name"', inst)]).to_csv()
        assert text.endswith("\r\n")
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["program", "solver", "cost", "elapsed_s", "states"]
        assert rows[1][0] == 'odd,"name"'
        assert len(rows) == 4
        # numeric columns parse back
        for row in rows[1:]:
            float(row[2]), float(row[3]), int(row[4])

    def test_no_programs_means_header_only(self):
        table = run_solver_comparison([])
        assert table.rows == []
        assert table.to_csv() == "program,solver,cost,elapsed_s,states\r\n"


class TestGrid:
    def test_costs_indexed_beta_then_eta(self):
        name, inst = one_fixture()
        res = run_grid([(name, inst)], beta_values=(1, 2), eta_values=(0.0, 0.9))
        assert res.beta_values == (1, 2)
        assert res.eta_values == (0.0, 0.9)
        assert len(res.costs[name]) == 2
        assert len(res.costs[name][0]) == 2

    def test_reference_cell_normalizes_to_one(self):
        name, inst = one_fixture()
        res = run_grid([(name, inst)], beta_values=(1, 4), eta_values=(0.0,))
        assert res.normalized[name][0][0] == 1.0
        assert res.mean_normalized[0][0] == 1.0
        assert all(v > 0 for row in res.normalized[name] for v in row)

    def test_json_shape(self):
        name, inst = one_fixture()
        j = run_grid([(name, inst)], beta_values=(1,), eta_values=(0.5,)).to_json()
        assert set(j) == {
            "beta",
            "eta",
            "costs",
            "elapsed_s",
            "states",
            "normalized_time",
            "mean_normalized_time",
        }
        assert j["beta"] == [1]
        assert j["eta"] == [0.5]


class TestHistogram:
    def test_bins_account_for_every_trial(self):
        params = RandomModelParams(n=5, m=6, k=2, tau=2, s=1, seed=3)
        res = run_histogram(params, 200)
        assert res.trials == 200
        assert sum(res.bins.values()) == 200
        total = sum(k * v for k, v in res.bins.items())
        assert abs(res.mean - total / 200) < 1e-9

    def test_cv_is_stddev_over_mean(self):
        params = RandomModelParams(n=5, m=6, k=2, tau=2, s=1, seed=3)
        res = run_histogram(params, 100)
        assert abs(res.cv - res.stddev / res.mean) < 1e-12

    def test_deterministic_given_seed(self):
        params = RandomModelParams(n=4, m=4, k=2, tau=2, s=1, seed=8)
        assert run_histogram(params, 50).bins == run_histogram(params, 50).bins

    def test_single_type_alphabet_collapses_to_one_bin(self):
        params = RandomModelParams(n=5, m=4, k=2, tau=1, s=1, seed=0)
        res = run_histogram(params, 50)
        assert len(res.bins) == 1
        assert res.stddev == 0.0

    def test_stddev_matches_direct_formula(self):
        params = RandomModelParams(n=4, m=5, k=2, tau=3, s=2, seed=1)
        res = run_histogram(params, 150)
        mean = sum(k * v for k, v in res.bins.items()) / 150
        var = sum(v * (k - mean) ** 2 for k, v in res.bins.items()) / 150
        assert abs(res.stddev - math.sqrt(var)) < 1e-9
