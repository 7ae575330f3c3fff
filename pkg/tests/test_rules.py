import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mediandyn.graph import build_complete_bipartite, build_cycle, build_torus
from mediandyn.rules import (RuleKind, majority_update, median_coins_update, median_update,
                             pool_vertices, site_update, ztgd_update)

unit = st.floats(0.0, 1.0, allow_nan=False)
odd_pool = st.integers(0, 4).flatmap(lambda k: st.lists(unit, min_size=2 * k + 1, max_size=2 * k + 1))
even_pool = st.integers(1, 4).flatmap(lambda k: st.lists(unit, min_size=2 * k, max_size=2 * k))
bits = st.integers(0, 1)


def test_examples():
    assert median_update([0.2, 0.7, 0.5]) == 0.5
    assert median_update([0.1, 0.3, 0.5, 0.8, 0.9]) == 0.5
    assert median_update([0.3, 0.3, 0.9]) == 0.3
    assert median_coins_update([0.1, 0.9, 0.3, 0.8], 0) == 0.3
    assert median_coins_update([0.1, 0.9, 0.3, 0.8], 1) == 0.8
    assert median_coins_update([0.4, 0.4], 0) == median_coins_update([0.4, 0.4], 1) == 0.4
    assert majority_update([1, 0, 1]) == 1
    assert majority_update([0, 0, 0, 1, 1]) == 0
    assert ztgd_update([1, 1, 1, 0], 0, 0) == 1
    assert ztgd_update([1, 1, 0, 0], 1, 0) == 0
    assert ztgd_update([1, 1, 0, 0], 0, 1) == 1


def test_contract_violations():
    with pytest.raises(ValueError):
        median_update([0.1, 0.2])
    with pytest.raises(ValueError):
        median_coins_update([0.1, 0.2, 0.3], 0)
    with pytest.raises(ValueError):
        median_coins_update([], 0)
    with pytest.raises(ValueError):
        majority_update([0, 2, 1])
    with pytest.raises(ValueError):
        ztgd_update([0, 1, 1], 0, 0)
    with pytest.raises(ValueError):
        RuleKind.parse("voter")


def test_majority_equals_median_on_random_bits():
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        pool = rng.integers(0, 2, size=2 * rng.integers(0, 5) + 1).tolist()
        assert majority_update(pool) == median_update(pool)


def test_ztgd_matches_coins_rule_exhaustive():
    for pool in itertools.product((0, 1), repeat=4):
        for coin in (0, 1):
            for cur in (0, 1):
                assert ztgd_update(list(pool), cur, coin) == median_coins_update(list(pool), coin)


def _raise(pool, i, amount):
    out = list(pool)
    out[i] = min(1.0, out[i] + amount)
    return out


@settings(max_examples=300)
@given(odd_pool, st.data())
def test_monotone_odd(pool, data):
    i = data.draw(st.integers(0, len(pool) - 1))
    up = _raise(pool, i, data.draw(unit))
    assert median_update(up) >= median_update(pool)
    b = [int(v > 0.5) for v in pool]
    b_up = [int(v > 0.5) for v in up]
    assert majority_update(b_up) >= majority_update(b)


@settings(max_examples=300)
@given(even_pool, st.data(), bits, bits)
def test_monotone_even(pool, data, coin, cur):
    i = data.draw(st.integers(0, len(pool) - 1))
    up = _raise(pool, i, data.draw(unit))
    assert median_coins_update(up, coin) >= median_coins_update(pool, coin)
    b = [int(v > 0.5) for v in pool]
    b_up = [int(v > 0.5) for v in up]
    assert ztgd_update(b_up, cur, coin) >= ztgd_update(b, cur, coin)


@settings(max_examples=200)
@given(odd_pool, even_pool, st.randoms(use_true_random=False), bits)
def test_permutation_invariance(odd, even, rnd, coin):
    o2, e2 = odd[:], even[:]
    rnd.shuffle(o2)
    rnd.shuffle(e2)
    assert median_update(o2) == median_update(odd)
    assert median_coins_update(e2, coin) == median_coins_update(even, coin)
    bo, be = [int(v > 0.5) for v in odd], [int(v > 0.5) for v in even]
    rnd.shuffle(bo)
    assert majority_update(bo) == majority_update([int(v > 0.5) for v in odd])
    assert ztgd_update(sorted(be), 0, coin) == ztgd_update(be, 0, coin)


GRID = [Fraction(k, 4) for k in range(5)]
LEVELS = [Fraction(k, 8) for k in range(9)]


@pytest.mark.parametrize("size", [3, 5])
def test_threshold_commutation_exhaustive(size):
    for pool in itertools.product(GRID, repeat=size):
        med = median_update(list(pool))
        for p in LEVELS:
            assert int(med <= p) == majority_update([int(v <= p) for v in pool])


@pytest.mark.parametrize("size", [2, 4])
def test_threshold_commutation_even_exhaustive(size):
    # the indicator 1{. <= p} reverses order, so the lower middle maps to the upper tie bit
    for pool in itertools.product(GRID, repeat=size):
        for coin in (0, 1):
            v = median_coins_update(list(pool), coin)
            for p in LEVELS:
                assert int(v <= p) == ztgd_update([int(u <= p) for u in pool], 0, 1 - coin)


@settings(max_examples=300)
@given(odd_pool, unit)
def test_median_minimizes_absolute_deviation(pool, v):
    m = median_update(pool)
    cost = lambda c: sum(abs(c - u) for u in pool)
    assert cost(m) <= cost(v) + 1e-12
    assert all(cost(m) <= cost(u) + 1e-12 for u in pool)


@settings(max_examples=300)
@given(even_pool, unit, bits)
def test_either_middle_minimizes_absolute_deviation(pool, v, coin):
    m = median_coins_update(pool, coin)
    assert sum(abs(m - u) for u in pool) <= sum(abs(v - u) for u in pool) + 1e-12


def test_pools_and_site_update():
    g = build_torus(5, 2)
    assert len(pool_vertices(g, RuleKind.MEDIAN, 0)) == 5
    assert 0 in pool_vertices(g, RuleKind.MEDIAN, 0)
    assert len(pool_vertices(g, RuleKind.MEDIAN_COINS, 0)) == 4
    # odd degree: both conventions poll the same vertices
    k = build_complete_bipartite(3, 4)
    x = k.index_of((2, 1))
    assert pool_vertices(k, RuleKind.MEDIAN, x) == pool_vertices(k, RuleKind.MEDIAN_COINS, x)
    vals = np.array([0.1, 0.9, 0.3, 0.8, 0.5])
    c = build_cycle(5)
    assert site_update(c, RuleKind.MEDIAN, vals, 0, 0) == 0.5
    assert site_update(c, RuleKind.MEDIAN_COINS, vals, 0, 0) == 0.5
    assert site_update(c, RuleKind.MEDIAN_COINS, vals, 0, 1) == 0.9
    bits_ = np.array([1, 1, 0, 0, 0])
    assert site_update(c, RuleKind.ZTGD, bits_, 0, 0) == 0
    assert site_update(c, RuleKind.MAJORITY, bits_, 0, 0) == 1
    assert site_update(c, RuleKind.MAJORITY, bits_, 3, 0) == 0
