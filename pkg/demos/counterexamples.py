"""
Two small counterexamples
=========================

On ``K_{3,7}``, updating the vertices one by one in a fixed order makes the
probability that a given vertex holds a 1 go down and then up. And a
seven-bit odd monotone function has an expectation that is not convex in
``p`` on ``[0, 1/2]``.
"""

import numpy as np

from mediandyn import analytic, experiments

p0, p1, pend = analytic.bipartite_sequence(0.4, 7)
print(f"exact: p0={p0}, p1={p1:.6f}, final={pend:.8f}")
mc = experiments.bipartite_sequence_mc(7, 0.4, samples=200_000, seed=0)
for step, (e, s) in enumerate(zip(mc["estimates"], mc["se"])):
    print(f"  step {step}: {e:.4f} +/- {s:.4f}")
print("verdict:", experiments.sequence_verdict([p0, p1, pend]))

grid = np.linspace(0, 0.5, 11)
vals = [analytic.lehner_expectation(p) for p in grid]
d2 = analytic.second_differences(vals, grid[1] - grid[0])
print("\nE f(p) on [0, 1/2]:", np.round(vals, 4))
print("second differences:", np.round(d2, 3))
