"""
Median dynamics on a complete graph
===================================

Every vertex sees every other vertex, so the first ring at ``x`` sets it
to the median of the initial opinions and nothing moves afterwards. The
marginal ``P[eta_t(x) <= alpha]`` then has a closed form; here it is
compared against Monte Carlo.
"""

import numpy as np

from mediandyn import analytic, experiments
from mediandyn.engine import init_uniform, run
from mediandyn.graph import build_complete
from mediandyn.randomness import sample_event_log

g = build_complete(5)

# one trajectory: each vertex flips at most once
traj = run(g, "median", init_uniform(g, 1), sample_event_log(g, 4.0, 1))
print("initial opinions:", np.round(traj.initial.values, 3))
print("flips (time, vertex, new):")
for t, v, new in zip(traj.times, traj.vertices, traj.new):
    print(f"  {t:6.3f}  {v}  {new:.3f}")

# marginals against the closed form, 20000 replicas
est = experiments.estimate_marginals(g, "median", 0, [0.5, 1.0, 2.0], [0.1, 0.25, 0.4],
                                     replicas=20_000, seed=0)
print("\n   t  alpha   MC      exact    z")
for e in est:
    exact = analytic.mu_kn(5, e.level, e.t)
    print(f"{e.t:4.1f}  {e.level:4.2f}  {e.estimate:.4f}  {exact:.4f}  {(e.estimate - exact) / e.se:+.2f}")

# the even case: a tie between the two halves is broken by the vertex itself
print("\nK6, alpha=0.4:", [round(analytic.mu_kn(6, 0.4, t), 4) for t in (0, 0.5, 1, 2, 10)])
