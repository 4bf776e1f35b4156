"""Batch experiments: solver comparison tables, the beta/eta grid, and
cost histograms over random labelings.

Everything here is deterministic given seeds, except wall-clock fields,
which are recorded for reporting but never used in comparisons (the
counters in states_examined are the portable effort measure).
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .generate import RandomModelParams, gen_random_instance
from .model import CapacityError, SchemaError, TilingInstance
from .search import EncodedInstance, batch_costs
from .solvers import GreedyParams, solve_exhaustive, solve_greedy, solve_local

__all__ = [
    "ComparisonTable",
    "GridResult",
    "HistogramResult",
    "run_solver_comparison",
    "run_grid",
    "run_histogram",
]

CSV_COLUMNS = ("program", "solver", "cost", "elapsed_s", "states")


@dataclass
class ComparisonTable:
    rows: list[dict[str, Any]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(self.rows)
        return buf.getvalue()


def run_solver_comparison(
    entries: Sequence[tuple[str, TilingInstance]],
    params: GreedyParams | None = None,
    state_cap: int | None = None,
) -> ComparisonTable:
    """Run local, exhaustive and greedy on each instance.

    One row per (program, solver).  An exhaustive run refused for size
    is recorded as a "skipped" row instead of aborting the table.
    """
    if params is None:
        params = GreedyParams()
    rows: list[dict[str, Any]] = []
    for name, instance in entries:
        for solver, run in (
            ("local", lambda inst: solve_local(inst)),
            ("exhaustive", lambda inst: solve_exhaustive(inst, state_cap)),
            ("greedy", lambda inst: solve_greedy(inst, params, state_cap)),
        ):
            try:
                report = run(instance)
            except CapacityError:
                rows.append(
                    {
                        "program": name,
                        "solver": solver,
                        "cost": "skipped",
                        "elapsed_s": "",
                        "states": "",
                    }
                )
                continue
            rows.append(
                {
                    "program": name,
                    "solver": solver,
                    "cost": report.cost.total,
                    "elapsed_s": round(report.elapsed, 6),
                    "states": report.states_examined,
                }
            )
    return ComparisonTable(rows)


@dataclass
class GridResult:
    """Greedy sweeps over a beta x eta grid.

    Each per-program grid is indexed [beta position][eta position].
    ``normalized`` rescales each program's elapsed grid by its own
    maximum cell; ``mean_normalized`` averages those element-wise, so
    every cell lies in [0, 1] and each program weighs equally.
    """

    beta_values: tuple[int, ...]
    eta_values: tuple[float, ...]
    costs: dict[str, list[list[float]]]
    elapsed: dict[str, list[list[float]]]
    states: dict[str, list[list[int]]]
    normalized: dict[str, list[list[float]]]
    mean_normalized: list[list[float]]

    def to_json(self) -> dict[str, Any]:
        return {
            "beta": list(self.beta_values),
            "eta": list(self.eta_values),
            "costs": self.costs,
            "elapsed_s": self.elapsed,
            "states": self.states,
            "normalized_time": self.normalized,
            "mean_normalized_time": self.mean_normalized,
        }


def run_grid(
    entries: Sequence[tuple[str, TilingInstance]],
    beta_values: Sequence[int] = (1, 2, 4, 8),
    eta_values: Sequence[float] = (0.0, 0.5, 0.9),
    alpha: int = 10,
    seed: int = 0,
    state_cap: int | None = None,
) -> GridResult:
    if not beta_values or not eta_values:
        raise SchemaError("grid axes must be non-empty")
    beta_values = tuple(int(b) for b in beta_values)
    eta_values = tuple(float(e) for e in eta_values)
    costs: dict[str, list[list[float]]] = {}
    elapsed: dict[str, list[list[float]]] = {}
    states: dict[str, list[list[int]]] = {}
    normalized: dict[str, list[list[float]]] = {}
    for name, instance in entries:
        cost_grid: list[list[float]] = []
        time_grid: list[list[float]] = []
        state_grid: list[list[int]] = []
        for beta in beta_values:
            cost_row: list[float] = []
            time_row: list[float] = []
            state_row: list[int] = []
            for eta in eta_values:
                params = GreedyParams(alpha=alpha, beta=beta, eta=eta, seed=seed)
                report = solve_greedy(instance, params, state_cap)
                cost_row.append(report.cost.total)
                time_row.append(report.elapsed)
                state_row.append(report.states_examined)
            cost_grid.append(cost_row)
            time_grid.append(time_row)
            state_grid.append(state_row)
        costs[name] = cost_grid
        elapsed[name] = time_grid
        states[name] = state_grid
        peak = max(max(row) for row in time_grid)
        normalized[name] = [
            [(t / peak if peak > 0 else 0.0) for t in row] for row in time_grid
        ]

    mean_normalized: list[list[float]] = []
    n_programs = len(normalized)
    for bi in range(len(beta_values)):
        row = []
        for ei in range(len(eta_values)):
            total = sum(grid[bi][ei] for grid in normalized.values())
            row.append(total / n_programs if n_programs else 0.0)
        mean_normalized.append(row)
    return GridResult(
        beta_values, eta_values, costs, elapsed, states, normalized, mean_normalized
    )


@dataclass
class HistogramResult:
    """Costs of uniform random labelings of one sampled instance."""

    params: RandomModelParams
    trials: int
    bins: dict[int, int]
    mean: float
    stddev: float

    @property
    def cv(self) -> float:
        return self.stddev / self.mean if self.mean > 0 else 0.0

    def to_json(self) -> dict[str, Any]:
        return {
            "params": self.params.to_json(),
            "trials": self.trials,
            "bins": {str(c): self.bins[c] for c in sorted(self.bins)},
            "mean": self.mean,
            "stddev": self.stddev,
            "cv": self.cv,
        }


def run_histogram(params: RandomModelParams, trials: int) -> HistogramResult:
    """Sample one instance from ``params``, then cost ``trials`` uniform
    labelings drawn from the derived stream [params.seed, 1] (independent
    of the instance draw)."""
    if isinstance(trials, bool) or not isinstance(trials, int) or trials < 1:
        raise SchemaError(f"trials must be a positive integer, got {trials!r}")
    instance = gen_random_instance(params)
    enc = EncodedInstance(instance)
    rng = np.random.default_rng([params.seed, 1])
    labels = rng.integers(0, params.tau, size=(trials, len(instance.vertices)))
    totals = batch_costs(enc, labels)
    bins = Counter(int(round(t)) for t in totals)
    return HistogramResult(
        params=params,
        trials=trials,
        bins=dict(bins),
        mean=float(totals.mean()),
        stddev=float(totals.std()),
    )
