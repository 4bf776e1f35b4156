"""How execution order changes peak memory occupancy.

Two views of a program's memory behavior under an execution order:
kappa counts matrices live during some step, residency counts matrices
held across a step boundary.  The exhaustive order search trims
residency; on programs derived from graphs it recovers a classic graph
quantity (vertex count + 1 + cutwidth).
"""

from tilesolve import (
    PlainGraph,
    canonical_order,
    cutwidth_bruteforce,
    cutwidth_program,
    fixture_programs,
    lifespan_profile,
    min_residency_order,
    rename_single_assignment,
)

print("bundled programs, dependency-order execution vs best found:\n")
print(f"{'program':<12}{'kappa':>6}{'residency':>11}{'best residency':>16}")
for name, program in fixture_programs():
    program = rename_single_assignment(program)
    canonical = lifespan_profile(program, canonical_order(program))
    best = min_residency_order(program)
    print(f"{name:<12}{canonical.kappa:>6}{canonical.residency:>11}"
          f"{best.residency:>16}")

print("""
graph-derived programs (hold every edge's scratch matrix until both
endpoints are processed) tie minimum residency to cutwidth:
""")

graphs = {
    "path-5": PlainGraph(
        tuple("abcde"),
        (("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")),
    ),
    "star-5": PlainGraph(
        tuple("hwxyz"),
        (("h", "w"), ("h", "x"), ("h", "y"), ("h", "z")),
    ),
    "K4": PlainGraph(
        tuple("abcd"),
        (("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")),
    ),
}
for name, g in graphs.items():
    prog = cutwidth_program(g)
    best = min_residency_order(prog)
    cw = cutwidth_bruteforce(g)
    n = len(g.vertices)
    print(f"{name:<8} min residency {best.residency}  =  "
          f"{n} vertices + 1 + cutwidth {cw}")
    print(f"         best vertex order: {best.order[1:-1]}")
