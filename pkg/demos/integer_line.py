"""
Majority dynamics on a long cycle
=================================

A cycle of 200 vertices stands in for the integer line. Blocks of
alternating opinions between stable pairs evolve independently, and
summing their contributions reproduces the closed-form density of ones.
"""

from mediandyn import analytic, experiments
from mediandyn.graph import build_cycle

g = build_cycle(200)
print("  p    t    MC       formula  intervals")
for e in experiments.estimate_marginals(g, "majority", 0, [0.5, 2.0], [0.2, 0.4],
                                        replicas=20_000, seed=5):
    blocks, tail = analytic.p_z_from_intervals(e.level, e.t)
    print(f"{e.level:.1f}  {e.t:.1f}  {e.estimate:.4f}   {analytic.p_z(e.level, e.t):.4f}   "
          f"{blocks:.4f} (+/- {tail:.0e})")

# a single alternating block between frozen ends
for k in (1, 3, 5):
    print(f"interval 1|{'10' * (k // 2)}1|1, expected ones at t=1:",
          round(analytic.f_interval(1, 1, k, 1.0), 4))
