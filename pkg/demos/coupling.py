"""
Thresholding median dynamics
============================

Run median dynamics from uniform opinions, then look only at which
vertices sit at or below a level ``p``. That indicator process is majority
dynamics started from Bernoulli(``p``), flip for flip, on the same clocks.
"""

import numpy as np

from mediandyn import experiments
from mediandyn.engine import init_uniform, run, threshold_project
from mediandyn.graph import build_torus
from mediandyn.randomness import sample_event_log

g = build_torus(10, 2)
log = sample_event_log(g, horizon=5.0, seed=3)
eta0 = init_uniform(g, 3)
print(f"{g.name}: {len(log)} clock rings up to t=5")

med = run(g, "median", eta0, log)
maj = run(g, "majority", threshold_project(eta0, 0.4), log)
print(f"median flips: {len(med)}, majority flips at p=0.4: {len(maj)}")

# the thresholded median path equals the majority path at every time
for t in (1.0, 2.5, 5.0):
    a = threshold_project(med.snapshot(t), 0.4).values
    b = maj.snapshot(t).values
    print(f"t={t}: configurations equal: {np.array_equal(a, b)}")

report = experiments.check_coupling(g, log, eta0, np.linspace(0, 1, 21))
print("check over 21 levels:", report)

# the swap used for the domination argument, also checked along whole paths
for alpha, beta in [(0.25, 0.5), (0.1, 0.8), (0.4, 0.4)]:
    rep = experiments.check_domination(g, log, alpha, beta, eta0)
    print(f"domination alpha={alpha} beta={beta}: passed={rep.passed} ({rep.checks} checks)")
