"""Closed-form marginals and counterexample values.

Binomial coefficients are exact Python integers; sums go through
``math.fsum``. Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import itertools
from math import comb, exp, fsum


def _check_unit(name: str, v: float) -> None:
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"{name}={v} outside [0, 1]")


def _check_time(t: float) -> None:
    if t < 0:
        raise ValueError(f"t={t} must be >= 0")


def binomial_upper_tail(m: int, k0: int, p: float) -> float:
    """``P[Bin(m, p) >= k0]``."""
    return fsum(comb(m, k) * p**k * (1 - p) ** (m - k) for k in range(max(k0, 0), m + 1))


def mu_kn_odd(n: int, alpha: float, t: float) -> float:
    """``P[eta_t(x) < alpha]`` on the complete graph with ``2n + 1`` vertices."""
    if n < 0:
        raise ValueError("n must be >= 0")
    _check_unit("alpha", alpha)
    _check_time(t)
    w = exp(-t)
    return w * alpha + (1 - w) * binomial_upper_tail(2 * n + 1, n + 1, alpha)


def mu_kn_even(n: int, alpha: float, t: float) -> float:
    """``P[eta_t(x) < alpha]`` on the complete graph with ``2n`` vertices.

    An exact half/half split of initial opinions resolves either way with
    probability 1/2.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_unit("alpha", alpha)
    _check_time(t)
    w = exp(-t)
    tie = 0.5 * comb(2 * n, n) * (alpha * (1 - alpha)) ** n
    return w * alpha + (1 - w) * (binomial_upper_tail(2 * n, n + 1, alpha) + tie)


def mu_kn(size: int, alpha: float, t: float) -> float:
    """Dispatch on the parity of the number of vertices."""
    if size < 1:
        raise ValueError("size must be >= 1")
    return mu_kn_odd(size // 2, alpha, t) if size % 2 else mu_kn_even(size // 2, alpha, t)


def direct_s(n: int, alpha: float) -> float:
    """Term-by-term alpha-derivative of the odd-case binomial tail."""
    m = 2 * n + 1
    return fsum(comb(m, k) * (k * alpha ** (k - 1) * (1 - alpha) ** (m - k)
                              - (m - k) * alpha**k * (1 - alpha) ** max(m - k - 1, 0))
                for k in range(n + 1, m + 1))


def telescoped_s(n: int, alpha: float) -> float:
    return comb(2 * n + 1, n + 1) * (n + 1) * alpha**n * (1 - alpha) ** n


def direct_sbar(n: int, alpha: float) -> float:
    """Term-by-term alpha-derivative of the even-case strict-majority tail."""
    m = 2 * n
    return fsum(comb(m, k) * (k * alpha ** (k - 1) * (1 - alpha) ** (m - k)
                              - (m - k) * alpha**k * (1 - alpha) ** max(m - k - 1, 0))
                for k in range(n + 1, m + 1))


def telescoped_sbar(n: int, alpha: float) -> float:
    return n * alpha * comb(2 * n, n) * (alpha * (1 - alpha)) ** (n - 1)


def mu_kn_odd_dalpha(n: int, alpha: float, t: float) -> float:
    w = exp(-t)
    return w + (1 - w) * telescoped_s(n, alpha)


def mu_kn_even_dalpha(n: int, alpha: float, t: float) -> float:
    w = exp(-t)
    return w + (1 - w) * (alpha * (1 - alpha)) ** (n - 1) * comb(2 * n, n) * n / 2


def p_z(p: float, t: float) -> float:
    """``P[xi_t(0) = 1]`` for majority dynamics on the integer line from Bernoulli(p)."""
    _check_unit("p", p)
    _check_time(t)
    return 3 * p**2 - 2 * p**3 - exp(-t) * p * (1 - p) * (2 * p - 1)


def p_z_dt(p: float, t: float) -> float:
    return exp(-t) * p * (1 - p) * (2 * p - 1)


def p_z_dpp(p: float, t: float) -> float:
    return 6 * (1 - exp(-t)) * (1 - 2 * p)


def _check_interval(i: int, j: int, k: int) -> None:
    if i not in (0, 1) or j not in (0, 1):
        raise ValueError("boundary opinions must be bits")
    if k < 1:
        raise ValueError("k must be >= 1")
    if (i == j) != (k % 2 == 1):
        raise ValueError(f"parity violation: k={k} must be {'odd' if i == j else 'even'} "
                         f"for boundary ({i}, {j})")


def f_interval(i: int, j: int, k: int, t: float) -> float:
    """Expected number of ones at time ``t`` on an alternating interval of length ``k``
    whose endpoints (and their outer neighbors) hold ``i`` and ``j``."""
    _check_interval(i, j, k)
    _check_time(t)
    if i != j:
        return k / 2
    if k == 1:
        return float(i)
    ones = (k + 3) / 2 - exp(-t)
    return ones if i == 1 else k - ones


def interval_prob(i: int, j: int, k: int, p: float) -> float:
    """Probability that the origin lies in an alternating block of type ``(i, j, k)``."""
    _check_interval(i, j, k)
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    q = 1 - p
    if i == j == 1:
        return k * p**3 * (p * q) ** ((k - 1) // 2)
    if i == j == 0:
        return k * q**3 * (p * q) ** ((k - 1) // 2)
    return k * (p * q) ** (k // 2 + 1)


def interval_types(k_max: int):
    """Admissible ``(i, j, k)`` with ``k <= k_max``."""
    for k in range(1, k_max + 1):
        if k % 2:
            yield 1, 1, k
            yield 0, 0, k
        else:
            yield 0, 1, k
            yield 1, 0, k


def interval_tail_bound(p: float, k_max: int) -> float:
    """Upper bound on the probability mass of blocks longer than ``k_max``.

    Every block type has mass at most ``2 k r^{(k-1)/2}`` with ``r = p(1-p)
    <= 1/4``; the bound sums that majorant over ``k > k_max``.
    """
    r = p * (1 - p)
    s = r ** 0.5
    k = k_max + 1
    # sum_{k>=K} k s^{k-1} = s^{K-1} (K - (K-1) s) / (1-s)^2
    return 2 * s ** (k - 1) * (k - (k - 1) * s) / (1 - s) ** 2


def p_z_from_intervals(p: float, t: float, tol: float = 1e-16, k_cap: int = 10_000):
    """Rebuild ``P[xi_t(0) = 1]`` by summing block contributions.

    Summation stops once ``(p(1-p))^{k/2}`` drops below ``tol``; returns the
    partial sum and the analytic bound on the omitted mass.
    """
    r = p * (1 - p)
    k_max = 1
    while r ** (k_max / 2) >= tol and k_max < k_cap:
        k_max += 1
    total = fsum(interval_prob(i, j, k, p) * f_interval(i, j, k, t) / k
                 for i, j, k in interval_types(k_max))
    return total, interval_tail_bound(p, k_max)


def bipartite_sequence(p: float, m: int) -> tuple[float, float, float]:
    """``(p_0, p_1, p_{m+2})`` for the sequential schedule on ``K_{3,m}``.

    ``p_k = p_1`` for ``1 <= k <= m+1``.
    """
    _check_unit("p", p)
    if m < 1 or m % 2 == 0:
        raise ValueError("m must be an odd integer >= 1")
    p1 = binomial_upper_tail(m, (m + 1) // 2, p)
    return p, p1, p**2 + 2 * p1 * p * (1 - p)


def lehner_f(x) -> int:
    """Odd monotone Boolean function on 7 bits: ``5 x_1 + x_2 + ... + x_7 > 5``."""
    if len(x) != 7:
        raise ValueError("lehner_f takes exactly 7 bits")
    return int(5 * x[0] + sum(x[1:]) > 5)


def lehner_expectation(p: float) -> float:
    _check_unit("p", p)
    return p * (1 - (1 - p) ** 6) + (1 - p) * p**6


def lehner_expectation_exhaustive(p: float) -> float:
    """Same expectation by summing over all 128 inputs."""
    return fsum(lehner_f(x) * p ** sum(x) * (1 - p) ** (7 - sum(x))
                for x in itertools.product((0, 1), repeat=7))


def second_differences(values, h: float):
    """Central second differences ``(v[i-1] - 2 v[i] + v[i+1]) / h^2``."""
    return [(values[i - 1] - 2 * values[i] + values[i + 1]) / h**2
            for i in range(1, len(values) - 1)]
