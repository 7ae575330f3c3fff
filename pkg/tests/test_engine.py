import math

import numpy as np
import pytest

from mediandyn import _kernels
from mediandyn.analytic import f_interval
from mediandyn.engine import (OpinionConfig, init_bernoulli, init_uniform, last_flip_time, run,
                              run_sequential, threshold_project, value_at)
from mediandyn.experiments import _tables
from mediandyn.graph import (build_complete, build_complete_bipartite, build_cycle,
                             build_path_with_frozen_boundary, build_torus)
from mediandyn.randomness import first_ring_time, sample_event_log
from mediandyn.rules import RuleKind


def test_config_validation():
    with pytest.raises(ValueError):
        OpinionConfig([0.2, 1.5])
    with pytest.raises(ValueError):
        OpinionConfig([0, 2], binary=True)
    c = OpinionConfig([0.2, 0.7])
    assert threshold_project(c, 0.2) == OpinionConfig([1, 0], binary=True)
    with pytest.raises(ValueError):
        c.values[0] = 0.1
    with pytest.raises(ValueError):
        threshold_project(c, 1.2)


def test_initializers_respect_frozen():
    g = build_path_with_frozen_boundary(6, 1.0, 0.0)
    u = init_uniform(g, 3)
    assert u.values[0] == 1.0 and u.values[-1] == 0.0
    b = init_bernoulli(g, 0.5, 3)
    assert b.binary and b.values[0] == 1 and b.values[-1] == 0
    assert init_uniform(g, 3) == u


def test_complete_graph_fixes_at_first_ring():
    for n in (5, 7):
        g = build_complete(n)
        for seed in range(20):
            init = init_uniform(g, seed)
            log = sample_event_log(g, 5.0, seed)
            traj = run(g, "median", init, log)
            med = np.median(init.values)
            assert np.all(traj.flip_counts() <= 1)
            assert np.all(traj.new == med)
            for x in range(n):
                lf = last_flip_time(traj, x)
                if lf is not None:
                    assert lf == first_ring_time(log, x)


def test_support_conservation():
    for g, rule in [(build_torus(8, 2), "median"), (build_torus(8, 2), "median_coins"),
                    (build_cycle(30), "median"), (build_complete_bipartite(3, 5), "median")]:
        init = init_uniform(g, 1)
        traj = run(g, rule, init, sample_event_log(g, 10.0, 1))
        support = set(init.values.tolist())
        assert len(traj) > 0
        assert set(traj.new.tolist()) <= support and set(traj.old.tolist()) <= support


def test_replay_determinism_and_errors():
    g = build_torus(6, 2)
    init, log = init_uniform(g, 2), sample_event_log(g, 5.0, 2)
    a, b = run(g, "median", init, log), run(g, "median", init, log)
    assert np.array_equal(a.times, b.times) and np.array_equal(a.new, b.new)
    with pytest.raises(ValueError):
        run(g, "majority", init, log)
    with pytest.raises(ValueError):
        run(build_torus(5, 2), "median", init, log)
    p = build_path_with_frozen_boundary(3, 1, 1)
    with pytest.raises(ValueError):
        run(p, "median", init_uniform(p, 0), sample_event_log(build_cycle(5), 3.0, 0))


def test_trajectory_queries(tmp_path):
    g = build_cycle(10)
    init = init_uniform(g, 4)
    traj = run(g, "median", init, sample_event_log(g, 6.0, 4))
    for x in range(10):
        idx = traj.flip_indices(x)
        assert value_at(traj, x, 0.0) == init.values[x]
        if len(idx):
            t = traj.times[idx[0]]
            assert value_at(traj, x, t) == traj.new[idx[0]]
            assert value_at(traj, x, np.nextafter(t, 0)) == traj.old[idx[0]]
            assert last_flip_time(traj, x) == traj.times[idx[-1]]
        else:
            assert last_flip_time(traj, x) is None
        assert value_at(traj, x, 6.0) == traj.snapshot(6.0).values[x]
    with pytest.raises(ValueError):
        traj.snapshot(7.0)
    traj.to_csv(tmp_path / "flips.csv")
    lines = (tmp_path / "flips.csv").read_text().splitlines()
    assert lines[0] == "time,vertex,old,new" and len(lines) == len(traj) + 1


def test_odd_degree_conventions_agree():
    g = build_complete_bipartite(3, 3)
    init, log = init_uniform(g, 8), sample_event_log(g, 8.0, 8)
    a, b = run(g, "median", init, log), run(g, "median_coins", init, log)
    assert np.array_equal(a.times, b.times) and np.array_equal(a.new, b.new)


def test_frozen_boundary_untouched():
    g = build_path_with_frozen_boundary(9, 1, 1)
    for seed in range(10):
        traj = run(g, "majority", init_bernoulli(g, 0.5, seed), sample_event_log(g, 10.0, seed))
        assert not np.isin(traj.vertices, [0, 10]).any()
        assert traj.snapshot(10.0).values[0] == traj.snapshot(10.0).values[10] == 1


@pytest.mark.parametrize("k", [3, 5])
def test_frozen_interval_expected_ones(k):
    # alternating interval 1 0 1 ... 1 between frozen ones
    g = build_path_with_frozen_boundary(k, 1, 1)
    init = OpinionConfig([1] + [1 - i % 2 for i in range(k)] + [1], binary=True)
    times = [0.5, 1.0, 2.0]
    R = 4000
    ones = np.zeros((R, len(times)))
    for r in range(R):
        traj = run(g, "majority", init, sample_event_log(g, 2.0, r))
        ones[r] = [traj.snapshot(t).values[1:-1].sum() for t in times]
    for j, t in enumerate(times):
        se = ones[:, j].std() / math.sqrt(R)
        assert abs(ones[:, j].mean() - f_interval(1, 1, k, t)) < 4 * se + 1e-9


@pytest.mark.parametrize("rule", ["median", "median_coins", "majority", "ztgd"])
def test_replay_kernel_matches_reference(rule):
    rule = RuleKind.parse(rule)
    for g in (build_torus(7, 2), build_cycle(15), build_complete_bipartite(3, 4)):
        pool, plen, _, _ = _tables(g, rule)
        for seed in range(5):
            init = init_bernoulli(g, 0.5, seed) if rule.binary else init_uniform(g, seed)
            log = sample_event_log(g, 6.0, seed)
            ref = run(g, rule, init, log).snapshot(6.0).values
            out = _kernels.replay(init.values.astype(float), pool, plen, log.vertices,
                                  log.coins.astype(np.int64))
            assert np.array_equal(out, ref.astype(float))


def test_run_sequential_bipartite():
    g = build_complete_bipartite(3, 5)
    x = g.index_of((1, 1))
    sched = [x] + [g.index_of((2, j)) for j in range(1, 6)] + [x]
    init = np.zeros(g.vertex_count, dtype=np.int8)
    init[[g.index_of((2, j)) for j in (1, 2, 3)]] = 1   # three of five class-2 vertices hold 1
    steps = run_sequential(g, sched, init)
    assert len(steps) == len(sched) + 1
    assert steps[1][x] == 1                      # majority of class 2
    assert all(s[x] == 1 for s in steps[1:7])
    # class-2 vertices now see (1, 0, 0) and go to 0; x then follows them
    assert steps[6][[g.index_of((2, j)) for j in range(1, 6)]].sum() == 0
    assert steps[-1][x] == 0
    batch = np.stack([init, 1 - init])
    out = run_sequential(g, sched, batch)
    assert np.array_equal(out[-1][0], steps[-1])
    with pytest.raises(ValueError):
        run_sequential(build_complete_bipartite(3, 4), [0], np.zeros(7, dtype=np.int8), tie_break="coins")
    c = run_sequential(build_complete_bipartite(3, 4), [0], np.array([0, 0, 0, 1, 1, 0, 0]),
                       coin_stream=[1], tie_break="coins")
    assert c[-1][0] == 1
