"""tilesolve: assign tiling types to the matrices of a distributed
matrix-algebra program so that expressions pay as little retiling as
possible.

The package models programs as weighted hypergraphs over tiling
alphabets, provides exact, local, random and bucketed-greedy solvers, a
linear-time solver for two-type copy/transpose forests, generators for
random ensembles and signed-graph balance instances, and memory
occupancy analysis over execution orders.
"""

from .cost import (
    COST_TOLERANCE,
    CostBreakdown,
    EdgeCost,
    edge_cost,
    hamming_mismatch,
    total_cost,
)
from .experiments import (
    ComparisonTable,
    GridResult,
    HistogramResult,
    run_grid,
    run_histogram,
    run_solver_comparison,
)
from .fixtures import fixture_instances, fixture_programs, op_feasible
from .generate import (
    RandomModelParams,
    SignedGraph,
    gen_random_instance,
    random_plain_graph,
    random_signed_graph,
    random_transpose_forest,
    signed_graph_program,
)
from .memory import (
    LifespanProfile,
    PlainGraph,
    canonical_order,
    cutwidth_bruteforce,
    cutwidth_program,
    lifespan_profile,
    min_residency_order,
)
from .model import (
    CapacityError,
    CycleError,
    Expression,
    Matrix,
    Program,
    SchemaError,
    TilingAlphabet,
    TilingAssignment,
    TilingError,
    TilingInstance,
    build_antichain_instance,
    build_instance,
    connected_components,
    cover_sets,
    load_program,
    parse_program,
    program_to_json,
    program_to_json_text,
    rename_single_assignment,
)
from .search import DEFAULT_STATE_CAP, STATE_CAP_ENV, batch_costs, resolve_state_cap
from .solvers import (
    GreedyParams,
    SolveReport,
    solve_exhaustive,
    solve_greedy,
    solve_local,
    solve_random,
    solve_transpose_forest,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "TilingError",
    "SchemaError",
    "CycleError",
    "CapacityError",
    # model
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
    # cost
    "COST_TOLERANCE",
    "EdgeCost",
    "CostBreakdown",
    "hamming_mismatch",
    "edge_cost",
    "total_cost",
    "batch_costs",
    "DEFAULT_STATE_CAP",
    "STATE_CAP_ENV",
    "resolve_state_cap",
    # solvers
    "GreedyParams",
    "SolveReport",
    "solve_local",
    "solve_exhaustive",
    "solve_random",
    "solve_greedy",
    "solve_transpose_forest",
    # generators
    "RandomModelParams",
    "SignedGraph",
    "gen_random_instance",
    "signed_graph_program",
    "random_signed_graph",
    "random_transpose_forest",
    "random_plain_graph",
    "op_feasible",
    "fixture_programs",
    "fixture_instances",
    # memory occupancy
    "PlainGraph",
    "LifespanProfile",
    "lifespan_profile",
    "canonical_order",
    "min_residency_order",
    "cutwidth_program",
    "cutwidth_bruteforce",
    # experiments
    "ComparisonTable",
    "GridResult",
    "HistogramResult",
    "run_solver_comparison",
    "run_grid",
    "run_histogram",
]
