"""Build a tiny matrix pipeline by hand and compare the solvers on it.

The program computes a gram matrix, squares it, and applies it to a
vector: every intermediate matrix needs a tiling type, and every
expression whose operands show up in the "wrong" type pays a retiling.
"""

import json

from tilesolve import (
    Expression,
    Matrix,
    Program,
    TilingAlphabet,
    build_instance,
    op_feasible,
    solve_exhaustive,
    solve_greedy,
    solve_local,
)

alphabet = TilingAlphabet(("row", "col"))


def expr(eid, op, out, *ins):
    return Expression(eid, op, out, ins, 1.0, op_feasible(op, alphabet, len(ins)))


program = Program(
    alphabet,
    (
        Matrix("X", 1000, 50),
        Matrix("Xt", 50, 1000),
        Matrix("K", 1000, 1000),
        Matrix("K2", 1000, 1000),
        Matrix("y", 1000, 1),
        Matrix("z", 1000, 1, output=True),
    ),
    (
        expr("t", "transpose", "Xt", "X"),
        expr("gram", "mul", "K", "X", "Xt"),
        expr("square", "mul", "K2", "K", "K"),
        expr("apply", "mul", "z", "K2", "y"),
    ),
)

instance = build_instance(program)
print(f"{len(instance.vertices)} matrices, {len(program.expressions)} expressions")
print("dependency layers:", instance.layers)
print()

for solve in (solve_local, solve_exhaustive, solve_greedy):
    report = solve(instance)
    print(f"{report.solver:>10}: cost {report.cost.total:.1f}  "
          f"states {report.states_examined}")
    print(f"{'':>12}{json.dumps(report.assignment.to_json())}")

# the mul(K, K) edge is why the optimum is not 0: K appears as both the
# row-major left operand and the col-major right operand
best = solve_exhaustive(instance)
for eid, ec in best.cost.per_edge.items():
    if ec.cost:
        print(f"\nunavoidable retiling at {eid!r}: {ec.mismatch} operand(s) off")
