import math

import numpy as np
import pytest
from scipy import stats

import _oracle
from mediandyn import analytic as an
from mediandyn.graph import build_complete, build_path_with_frozen_boundary

ALPHAS = np.linspace(0, 1, 101)


def test_spot_values():
    assert an.mu_kn_odd(1, 0.3, math.log(2)) == pytest.approx(0.258, abs=1e-12)
    assert an.p_z(0.4, math.log(2)) == pytest.approx(0.376, abs=1e-12)
    assert an.bipartite_sequence(0.4, 7) == pytest.approx((0.4, 0.289792, 0.29910016), abs=1e-12)
    assert an.lehner_expectation(0.3) == pytest.approx(0.2652156, abs=1e-7)
    assert an.f_interval(1, 1, 3, 0.0) == 2.0
    assert an.f_interval(0, 1, 4, 1.3) == 2.0
    assert an.f_interval(0, 0, 5, 0.0) == 2.0


def test_binomial_tail_matches_scipy():
    for m in (1, 5, 21, 60):
        for p in (0.05, 0.3, 0.5, 0.77):
            for k0 in (0, m // 2, m):
                assert an.binomial_upper_tail(m, k0, p) == pytest.approx(
                    stats.binom.sf(k0 - 1, m, p), rel=1e-10, abs=1e-300)


def test_kn_boundary_values():
    for size in range(1, 12):
        assert an.mu_kn(size, 0.37, 0.0) == pytest.approx(0.37)
        assert an.mu_kn(size, 0.0, 2.0) == 0.0
        assert an.mu_kn(size, 1.0, 2.0) == pytest.approx(1.0)
        assert an.mu_kn(size, 0.5, 3.0) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        an.mu_kn_odd(2, 1.2, 1.0)
    with pytest.raises(ValueError):
        an.mu_kn_even(2, 0.3, -1.0)


@pytest.mark.parametrize("size", [3, 4, 5, 6])
def test_kn_against_markov_chain(size):
    g = build_complete(size)
    Q = _oracle.generator(g, "majority")
    for a in (0.1, 0.25, 0.4):
        pi0 = _oracle.product_measure(g, a)
        for t in (0.3, 1.0, 2.5):
            exact = _oracle.marginal_one(g, _oracle.evolve(Q, pi0, t), 0)
            assert an.mu_kn(size, a, t) == pytest.approx(exact, abs=1e-12)


def test_telescoping_identities():
    for n in range(0, 21):
        for a in ALPHAS:
            assert abs(an.direct_s(n, a) - an.telescoped_s(n, a)) < 1e-12
            if n >= 1:
                assert abs(an.direct_sbar(n, a) - an.telescoped_sbar(n, a)) < 1e-12


def test_kn_time_derivative_nonpositive():
    h = 1e-4
    for n in range(1, 11):
        for f in (an.mu_kn_odd, an.mu_kn_even):
            for a in np.linspace(0, 0.5, 26):
                for t in (0.1, 0.5, 1.0, 3.0):
                    assert f(n, a, t + h) - f(n, a, t) <= 1e-15


def test_kn_alpha_derivative():
    h = 1e-6
    for n in range(1, 11):
        for f, df in ((an.mu_kn_odd, an.mu_kn_odd_dalpha), (an.mu_kn_even, an.mu_kn_even_dalpha)):
            for t in (0.2, 1.0, 4.0):
                grid = np.linspace(0, 0.5, 51)
                d = [df(n, a, t) for a in grid]
                assert all(b >= c - 1e-14 for c, b in zip(d, d[1:]))
                for a in (0.1, 0.3, 0.45):
                    fd = (f(n, a + h, t) - f(n, a - h, t)) / (2 * h)
                    assert fd == pytest.approx(df(n, a, t), rel=1e-6)


def test_p_z_properties():
    for p in np.linspace(0, 1, 11):
        assert an.p_z(p, 0.0) == pytest.approx(p, abs=1e-15)
        assert an.p_z(p, 50.0) == pytest.approx(3 * p**2 - 2 * p**3, abs=1e-15)
    for p in np.linspace(0, 0.5, 26):
        vals = [an.p_z(p, t) for t in np.linspace(0, 5, 51)]
        assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))
        for t in (0.0, 0.5, 2.0):
            assert an.p_z_dpp(p, t) >= 0
    h = 1e-5
    for p, t in [(0.2, 0.5), (0.45, 1.0), (0.7, 2.0)]:
        assert (an.p_z(p, t + h) - an.p_z(p, t - h)) / (2 * h) == pytest.approx(an.p_z_dt(p, t), rel=1e-6)
        d2 = (an.p_z(p + h, t) - 2 * an.p_z(p, t) + an.p_z(p - h, t)) / h**2
        assert d2 == pytest.approx(an.p_z_dpp(p, t), rel=1e-4, abs=1e-4)


def test_interval_parity():
    with pytest.raises(ValueError):
        an.f_interval(1, 1, 4, 1.0)
    with pytest.raises(ValueError):
        an.f_interval(0, 1, 3, 1.0)
    with pytest.raises(ValueError):
        an.interval_prob(1, 1, 2, 0.3)
    with pytest.raises(ValueError):
        an.interval_prob(1, 1, 3, 0.0)
    with pytest.raises(ValueError):
        an.f_interval(1, 1, 0, 1.0)


@pytest.mark.parametrize("i,j,k", [(1, 1, 1), (0, 0, 1), (1, 1, 3), (0, 0, 3), (1, 1, 5),
                                   (0, 0, 5), (0, 1, 2), (1, 0, 2), (0, 1, 4), (1, 0, 6)])
def test_f_interval_against_markov_chain(i, j, k):
    g = build_path_with_frozen_boundary(k, i, j)
    bits = [i] + [i if s % 2 == 0 else 1 - i for s in range(k)] + [j]
    assert bits[k] == j
    Q = _oracle.generator(g, "majority")
    pi0 = _oracle.point_mass(g, bits)
    for t in (0.0, 0.4, 1.5, 4.0):
        exact = _oracle.expected_ones(g, _oracle.evolve(Q, pi0, t), range(1, k + 1))
        assert an.f_interval(i, j, k, t) == pytest.approx(exact, abs=1e-10)


def test_interval_masses_sum_to_one():
    for p in (0.1, 0.3, 0.5, 0.8):
        total = math.fsum(an.interval_prob(i, j, k, p) for i, j, k in an.interval_types(400))
        assert total == pytest.approx(1.0, abs=1e-12)


def test_interval_reconstruction_of_p_z():
    for p in (0.05, 0.2, 0.4, 0.5, 0.75):
        for t in (0.0, 0.5, 1.0, 2.0, 6.0):
            val, tail = an.p_z_from_intervals(p, t)
            assert tail < 1e-12
            assert abs(val - an.p_z(p, t)) <= tail + 1e-12


def test_bipartite_sequence():
    for m in (1, 3, 7, 11):
        p0, p1, pf = an.bipartite_sequence(0.4, m)
        assert p0 == 0.4 and p1 == pytest.approx(stats.binom.sf((m - 1) // 2, m, 0.4))
    with pytest.raises(ValueError):
        an.bipartite_sequence(0.4, 6)


def test_lehner():
    for p in np.linspace(0, 1, 11):
        assert abs(an.lehner_expectation(p) - an.lehner_expectation_exhaustive(p)) < 1e-12
    assert an.lehner_f([1, 1, 0, 0, 0, 0, 0]) == 1
    assert an.lehner_f([1, 0, 0, 0, 0, 0, 0]) == 0
    assert an.lehner_f([0, 1, 1, 1, 1, 1, 1]) == 1
    # odd: f(1 - x) = 1 - f(x)
    for bits in np.ndindex(*(2,) * 7):
        assert an.lehner_f([1 - b for b in bits]) == 1 - an.lehner_f(list(bits))
    grid = np.linspace(0, 0.5, 11)
    d2 = an.second_differences([an.lehner_expectation(p) for p in grid], 0.05)
    assert min(d2) < 0
