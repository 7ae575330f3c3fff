"""Compiled Monte Carlo loops.

Clocks are sampled by superposition: with ``A`` active vertices the next
ring comes after an Exp(A) gap at a uniformly chosen active vertex, which
has the same law as independent rate-one clocks. Every replica reseeds
numba's generator from its own 32-bit seed, so results do not depend on
the number of replicas requested alongside it.

Opinions are float64 throughout; binary dynamics run on 0.0/1.0 values,
where the median of the pool is the majority.

Pools come from :meth:`Graph.pool_table`. ``self_pool`` pools (odd size)
give median/majority; plain pools of even size pick the lower middle on
coin 0 and the upper middle on coin 1.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def site_value(values, pool, plen, x, coin, buf):
    m = plen[x]
    if m == 0:
        return values[x]
    for i in range(m):
        v = values[pool[x, i]]
        j = i
        while j > 0 and buf[j - 1] > v:
            buf[j] = buf[j - 1]
            j -= 1
        buf[j] = v
    if m % 2 == 1:
        return buf[m // 2]
    if coin == 1:
        return buf[m // 2]
    return buf[m // 2 - 1]


@njit(cache=True)
def replay(values, pool, plen, ev_vertices, ev_coins):
    """Apply the rule along a fixed event sequence; returns final values."""
    vals = values.copy()
    buf = np.empty(pool.shape[1], dtype=np.float64)
    for i in range(ev_vertices.shape[0]):
        x = ev_vertices[i]
        vals[x] = site_value(vals, pool, plen, x, ev_coins[i], buf)
    return vals


@njit(cache=True)
def _init(vals, active, fixed, p):
    for v in range(vals.shape[0]):
        vals[v] = fixed[v]
    for i in range(active.shape[0]):
        u = np.random.random()
        if p < 0.0:
            vals[active[i]] = u
        else:
            vals[active[i]] = 1.0 if u < p else 0.0


@njit(cache=True)
def sample_at_times(pool, plen, active, fixed, p, x, times, seeds):
    """Opinion of ``x`` at each of ``times`` (sorted) for every replica.

    ``p < 0`` draws uniform initial opinions, otherwise Bernoulli(p) bits.
    ``fixed`` holds the values of frozen vertices.
    """
    R = seeds.shape[0]
    nt = times.shape[0]
    out = np.empty((R, nt), dtype=np.float64)
    n = fixed.shape[0]
    A = active.shape[0]
    vals = np.empty(n, dtype=np.float64)
    buf = np.empty(pool.shape[1], dtype=np.float64)
    horizon = times[nt - 1]
    for r in range(R):
        np.random.seed(seeds[r])
        _init(vals, active, fixed, p)
        t = 0.0
        k = 0
        while True:
            t_next = t + np.random.exponential(1.0) / A if A > 0 else np.inf
            while k < nt and times[k] < t_next:
                out[r, k] = vals[x]
                k += 1
            if t_next > horizon:
                break
            v = active[np.random.randint(0, A)]
            coin = np.random.randint(0, 2)
            vals[v] = site_value(vals, pool, plen, v, coin, buf)
            t = t_next
    return out


@njit(cache=True)
def absorb_deterministic(pool, plen, nbr, nlen, active, fixed, p, x, horizon, window, seeds):
    """Rejection-free run of a deterministic (self-pool) rule up to ``horizon``.

    Only rings at unstable vertices change the state and each such ring
    flips, so the next flip comes after Exp(|U|) at a uniform unstable
    vertex. Per replica returns the value of ``x`` at the horizon, the last
    flip time of ``x`` (-1 if none), the number of flips of ``x``, the
    fraction of active vertices with no flip in ``(horizon - window,
    horizon]``, the time of the last flip anywhere, and whether the state
    was absorbing at the horizon.
    """
    R = seeds.shape[0]
    n = fixed.shape[0]
    A = active.shape[0]
    x_val = np.empty(R)
    x_last = np.empty(R)
    x_flips = np.empty(R, dtype=np.int64)
    still = np.empty(R)
    last_any = np.empty(R)
    absorbed = np.empty(R, dtype=np.bool_)

    vals = np.empty(n)
    target = np.empty(n)
    upos = np.empty(n, dtype=np.int64)
    ulist = np.empty(n, dtype=np.int64)
    is_active = np.zeros(n, dtype=np.bool_)
    for i in range(A):
        is_active[active[i]] = True
    last = np.empty(n)
    buf = np.empty(pool.shape[1], dtype=np.float64)

    for r in range(R):
        np.random.seed(seeds[r])
        _init(vals, active, fixed, p)
        U = 0
        for v in range(n):
            upos[v] = -1
            last[v] = -1.0
        for i in range(A):
            v = active[i]
            target[v] = site_value(vals, pool, plen, v, 0, buf)
            if target[v] != vals[v]:
                upos[v] = U
                ulist[U] = v
                U += 1
        t = 0.0
        nflip = 0
        tl_any = -1.0
        while U > 0:
            t_next = t + np.random.exponential(1.0) / U
            if t_next > horizon:
                break
            t = t_next
            v = ulist[np.random.randint(0, U)]
            vals[v] = target[v]
            last[v] = t
            tl_any = t
            if v == x:
                nflip += 1
            # v and its neighbors are the only sites whose pools saw the change
            for j in range(-1, nlen[v]):
                w = v if j < 0 else nbr[v, j]
                if not is_active[w]:
                    continue
                target[w] = site_value(vals, pool, plen, w, 0, buf)
                unstable = target[w] != vals[w]
                if unstable and upos[w] < 0:
                    upos[w] = U
                    ulist[U] = w
                    U += 1
                elif not unstable and upos[w] >= 0:
                    k = upos[w]
                    moved = ulist[U - 1]
                    ulist[k] = moved
                    upos[moved] = k
                    upos[w] = -1
                    U -= 1
        x_val[r] = vals[x]
        x_last[r] = last[x]
        x_flips[r] = nflip
        quiet = 0
        for i in range(A):
            if last[active[i]] <= horizon - window:
                quiet += 1
        still[r] = quiet / A if A > 0 else 1.0
        last_any[r] = tl_any
        absorbed[r] = U == 0
    return x_val, x_last, x_flips, still, last_any, absorbed


@njit(cache=True)
def flip_statistics(pool, plen, active, fixed, p, horizon, seeds):
    """Per-vertex flip counts and last flip times (-1 if none) for every replica."""
    R = seeds.shape[0]
    n = fixed.shape[0]
    A = active.shape[0]
    counts = np.zeros((R, n), dtype=np.int64)
    last = np.full((R, n), -1.0)
    vals = np.empty(n)
    buf = np.empty(pool.shape[1], dtype=np.float64)
    for r in range(R):
        np.random.seed(seeds[r])
        _init(vals, active, fixed, p)
        t = 0.0
        while A > 0:
            t += np.random.exponential(1.0) / A
            if t > horizon:
                break
            v = active[np.random.randint(0, A)]
            coin = np.random.randint(0, 2)
            new = site_value(vals, pool, plen, v, coin, buf)
            if new != vals[v]:
                vals[v] = new
                counts[r, v] += 1
                last[r, v] = t
    return counts, last


@njit(cache=True)
def _energy(vals, nbr, nlen, x):
    h = 0.0
    for j in range(nlen[x]):
        h += abs(vals[nbr[x, j]] - vals[x])
    return h


@njit(cache=True)
def energy_trace(pool, plen, nbr, nlen, active, fixed, p, x, eps, times, seeds):
    """Energy bookkeeping at ``x``.

    For each replica: number of flips of ``x`` with ``|dH| >= eps[k]``, the
    largest energy change over all flips of ``x``, the number of flips of
    ``x``, and ``H`` and ``|value(x) - 1/2|`` sampled at ``times`` (sorted;
    the last entry is the horizon).
    """
    R = seeds.shape[0]
    ne = eps.shape[0]
    nt = times.shape[0]
    n = fixed.shape[0]
    A = active.shape[0]
    n_eps = np.zeros((R, ne), dtype=np.int64)
    max_dh = np.full(R, -np.inf)
    flips = np.zeros(R, dtype=np.int64)
    h_at = np.empty((R, nt))
    dev_at = np.empty((R, nt))
    vals = np.empty(n)
    buf = np.empty(pool.shape[1], dtype=np.float64)
    horizon = times[nt - 1]
    for r in range(R):
        np.random.seed(seeds[r])
        _init(vals, active, fixed, p)
        t = 0.0
        k = 0
        while True:
            t_next = t + np.random.exponential(1.0) / A
            while k < nt and times[k] < t_next:
                h_at[r, k] = _energy(vals, nbr, nlen, x)
                dev_at[r, k] = abs(vals[x] - 0.5)
                k += 1
            if t_next > horizon:
                break
            t = t_next
            v = active[np.random.randint(0, A)]
            coin = np.random.randint(0, 2)
            new = site_value(vals, pool, plen, v, coin, buf)
            if new != vals[v]:
                if v == x:
                    h0 = _energy(vals, nbr, nlen, x)
                    vals[v] = new
                    dh = _energy(vals, nbr, nlen, x) - h0
                    flips[r] += 1
                    if dh > max_dh[r]:
                        max_dh[r] = dh
                    for e in range(ne):
                        if abs(dh) >= eps[e]:
                            n_eps[r, e] += 1
                else:
                    vals[v] = new
    return n_eps, max_dh, flips, h_at, dev_at


@njit(cache=True)
def snapshots(pool, plen, active, init, times, seed):
    """Full configurations at each of ``times`` (sorted) for a single run."""
    nt = times.shape[0]
    n = init.shape[0]
    A = active.shape[0]
    out = np.empty((nt, n))
    vals = init.copy()
    buf = np.empty(pool.shape[1], dtype=np.float64)
    horizon = times[nt - 1]
    np.random.seed(seed)
    t = 0.0
    k = 0
    while True:
        t_next = t + np.random.exponential(1.0) / A if A > 0 else np.inf
        while k < nt and times[k] < t_next:
            out[k] = vals
            k += 1
        if t_next > horizon:
            break
        t = t_next
        v = active[np.random.randint(0, A)]
        coin = np.random.randint(0, 2)
        vals[v] = site_value(vals, pool, plen, v, coin, buf)
    return out
