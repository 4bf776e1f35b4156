"""Balance in signed graphs, answered with the tiling solver.

A signed graph is balanced when its vertices split into two camps with
all "=" edges inside a camp and all "!=" edges across.  Subdividing
each edge into a copy half and (for "!=") a transpose half produces a
two-type tiling program whose optimum counts exactly the edges no
2-coloring can satisfy.
"""

from tilesolve import (
    SignedGraph,
    build_antichain_instance,
    signed_graph_program,
    solve_exhaustive,
)


def frustration(graph):
    program = signed_graph_program(graph)
    report = solve_exhaustive(build_antichain_instance(program))
    return int(report.cost.total), report


balanced = SignedGraph(
    ("a", "b", "c", "d"),
    (("a", "b", "="), ("c", "d", "="), ("a", "c", "!="), ("b", "d", "!=")),
)
frustrated = SignedGraph(
    ("a", "b", "c"),
    (("a", "b", "!="), ("b", "c", "!="), ("a", "c", "!=")),
)

for name, g in (("balanced 4-cycle", balanced), ("all-unequal triangle", frustrated)):
    bad, report = frustration(g)
    sides = {
        v: t for v, t in report.assignment.to_json().items() if "|" not in v
    }
    print(f"{name}: {bad} unsatisfiable edge(s)")
    print(f"  camps: {sides}")
    if bad:
        culprits = [e for e, c in report.cost.per_edge.items() if c.cost]
        print(f"  paid at subdivision constraint(s): {culprits}")
    print()

print("an odd cycle of '!=' edges can never be split cleanly;")
print("every even one can.")
for n in range(3, 9):
    vs = tuple(f"v{i}" for i in range(n))
    ring = tuple((vs[i], vs[(i + 1) % n], "!=") for i in range(n))
    bad, _ = frustration(SignedGraph(vs, ring))
    print(f"  {n}-cycle: frustration {bad}")
