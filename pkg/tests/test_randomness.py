import numpy as np
import pytest
from scipy import stats

from mediandyn.graph import Graph, build_cycle, build_path_with_frozen_boundary, build_torus
from mediandyn.randomness import (EventLog, first_ring_time, replica_seeds, sample_event_log,
                                  vertex_ring_times)


def test_replay_determinism():
    g = build_torus(5, 2)
    a, b = sample_event_log(g, 4.0, 17), sample_event_log(g, 4.0, 17)
    assert a == b
    assert sample_event_log(g, 4.0, 18) != a


def test_log_is_sorted_and_read_only():
    log = sample_event_log(build_cycle(8), 10.0, 3)
    assert np.all(np.diff(log.times) > 0)
    assert log.times[-1] <= 10.0
    assert set(np.unique(log.coins)) <= {0, 1}
    with pytest.raises(ValueError):
        log.times[0] = 0.0


def test_rejects_unsorted_times():
    with pytest.raises(ValueError):
        EventLog(horizon=1.0, times=np.array([0.5, 0.2]), vertices=np.array([0, 1]),
                 coins=np.array([0, 1], dtype=np.uint8), seed=0, vertex_count=2)


def test_zero_horizon_and_frozen_vertices():
    assert len(sample_event_log(build_cycle(5), 0.0, 1)) == 0
    g = build_path_with_frozen_boundary(4, 0, 1)
    log = sample_event_log(g, 20.0, 5)
    assert not np.isin(log.vertices, [0, 5]).any()
    with pytest.raises(ValueError):
        sample_event_log(g, -1.0, 0)


def test_prefix_stability():
    g = build_cycle(12)
    short, long = sample_event_log(g, 3.0, 9), sample_event_log(g, 7.0, 9)
    k = len(short)
    assert np.array_equal(long.times[:k], short.times)
    assert np.array_equal(long.vertices[:k], short.vertices)
    assert np.array_equal(long.coins[:k], short.coins)
    assert long.times[k] > 3.0


def test_adding_vertices_keeps_clocks():
    # per-vertex streams do not depend on the graph size
    small, big = sample_event_log(build_cycle(5), 5.0, 4), sample_event_log(build_cycle(50), 5.0, 4)
    for x in range(5):
        assert np.array_equal(small.times[small.vertices == x], big.times[big.vertices == x])


def test_ring_counts_poisson():
    T, n = 3.0, 10_000
    counts = np.array([len(vertex_ring_times(s, 0, T)) for s in range(n)])
    se = np.sqrt(T / n)
    assert abs(counts.mean() - T) < 4 * se
    assert abs(counts.var() - T) < 0.15 * T
    obs = np.bincount(counts, minlength=12)[:12]
    exp = stats.poisson.pmf(np.arange(12), T) * n
    assert stats.chisquare(obs[:9], exp[:9] * obs[:9].sum() / exp[:9].sum()).pvalue > 1e-3


def test_first_ring_exponential():
    g = build_cycle(3)
    firsts = [first_ring_time(sample_event_log(g, 50.0, s), 1) for s in range(3000)]
    assert stats.kstest(firsts, "expon").pvalue > 1e-3
    assert first_ring_time(sample_event_log(g, 0.0, 0), 0) is None


def test_exchangeability_under_relabeling():
    g = build_cycle(9)
    perm = np.random.default_rng(0).permutation(9)
    inv = np.argsort(perm)
    # vertex v of g becomes perm[v] in h
    h = Graph(adjacency=tuple(tuple(sorted(int(perm[w]) for w in g.neighbors(int(inv[u]))))
                              for u in range(9)))
    a = [sample_event_log(g, 4.0, s).ring_counts()[0] for s in range(1500)]
    b = [sample_event_log(h, 4.0, 10_000 + s).ring_counts()[perm[0]] for s in range(1500)]
    assert stats.ks_2samp(a, b).pvalue > 1e-3


def test_coin_pairs_uniform():
    log = sample_event_log(build_torus(10, 2), 40.0, 123)
    c = log.coins.astype(int)
    pairs = 2 * c[:-1:2] + c[1::2]
    obs = np.bincount(pairs, minlength=4)
    assert stats.chisquare(obs).pvalue > 1e-3
    # coins do not track event gaps
    gaps = np.diff(log.times)
    assert abs(stats.pearsonr(gaps, c[1:]).statistic) < 4 / np.sqrt(len(gaps))


def test_serialization(tmp_path):
    log = sample_event_log(build_cycle(6), 5.0, 2)
    assert EventLog.from_json(log.to_json()) == log
    log.save(tmp_path / "log.npz")
    assert EventLog.load(tmp_path / "log.npz") == log


def test_replica_seeds():
    s = replica_seeds(5, 10)
    assert s.dtype == np.uint32 and len(set(s.tolist())) == 10
    assert np.array_equal(replica_seeds(5, 4), s[:4])
