"""Cost statistics over random constraint ensembles.

Two experiments on sampled k-uniform instances:

1. how concentrated the cost of a uniformly random labeling is
   (the histogram the `tilesolve hist` subcommand emits), and
2. how the mean random-labeling cost tracks the per-edge estimate
   (1 - 1/tau) * k, which a position-by-position argument predicts.
"""

import numpy as np

from tilesolve import RandomModelParams, gen_random_instance, run_histogram, solve_random

params = RandomModelParams(n=10, m=50, k=3, tau=3, s=3, seed=11)
hist = run_histogram(params, 5000)
print(f"uniform labeling cost over {hist.trials} draws "
      f"(n={params.n}, m={params.m}, k={params.k}, tau={params.tau}, s={params.s})")
print(f"mean {hist.mean:.2f}  stddev {hist.stddev:.2f}  cv {hist.cv:.4f}\n")

peak = max(hist.bins.values())
for cost in sorted(hist.bins):
    bar = "#" * max(1, round(40 * hist.bins[cost] / peak))
    print(f"{cost:>4} {bar}")

print()
for tau in (2, 3):
    params = RandomModelParams(n=40, m=120, k=3, tau=tau, s=1, seed=7)
    inst = gen_random_instance(params)
    costs = [solve_random(inst, seed=s).cost.total for s in range(400)]
    expected = (1 - 1 / tau) * params.k * params.m
    print(f"tau={tau}: mean random-labeling cost {np.mean(costs):7.2f}   "
          f"estimate {expected:7.2f}")
