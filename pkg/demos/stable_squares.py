"""
Limit law on the square lattice
===============================

Median dynamics on a 50 x 50 torus freezes quickly: a 2 x 2 block whose
opinions all lie in ``[a, b]`` stays there forever. Histogram of the
final opinion at a vertex, with the lower bound for every window.
"""

import numpy as np

from mediandyn import experiments
from mediandyn.graph import build_torus

h = experiments.limit_histogram(build_torus(50, 2), 0, replicas=2000, horizon=200.0,
                                window=50.0, seed=2)
print(f"kept {h.kept} runs, {h.excluded} still moving in the last {h.window:g} time units")
peak = h.counts.max()
for lo, c in zip(h.edges[:-1], h.counts):
    print(f"{lo:4.2f} {'#' * int(40 * c / peak)}")

print("\nwindow        P[in window]   bound")
for c in h.checks:
    print(f"[{c.lo:.2f}, {c.hi:.2f}]  {c.estimate:.4f}         {c.bound:.4f}")

print("\nP[value <= a] / a^4:", dict(zip(h.tail_alphas.tolist(), np.round(h.tail_ratios, 2).tolist())))
