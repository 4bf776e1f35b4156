"""Sweep the greedy solver's bucket knobs over the bundled programs.

beta bounds how many expressions join each enumeration bucket and eta
sets the priority cutoff for joining.  On the bundled programs the
found cost is flat across the whole grid (bigger buckets only buy more
enumeration work), which is the robustness the defaults rely on.
"""

from tilesolve import fixture_instances, run_grid

betas = (1, 2, 4, 8)
etas = (0.0, 0.5, 0.9)
entries = fixture_instances()
grid = run_grid(entries, beta_values=betas, eta_values=etas)

for name, _ in entries:
    flat = {c for row in grid.costs[name] for c in row}
    print(f"{name:<10} cost across all {len(betas) * len(etas)} cells: {flat}")

print("\nmean states examined (rows beta, columns eta):")
print("        " + "".join(f"eta={e:<8}" for e in etas))
for bi, beta in enumerate(betas):
    cells = []
    for ei in range(len(etas)):
        vals = [grid.states[name][bi][ei] for name, _ in entries]
        cells.append(sum(vals) / len(vals))
    print(f"beta={beta:<3}" + "".join(f"{c:<12.1f}" for c in cells))

print("\nnormalized solve time, averaged over programs (1.0 = beta 1, eta 0):")
for bi, beta in enumerate(betas):
    row = grid.mean_normalized[bi]
    print(f"beta={beta:<3}" + "".join(f"{v:<12.2f}" for v in row))
