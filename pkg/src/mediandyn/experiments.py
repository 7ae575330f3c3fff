"""Monte Carlo harnesses for marginals, couplings, fixation and energy.

Estimators report binomial standard errors and never claim more than the
data support: conjecture scans return "consistent" or "inconsistent",
never "true" or "false".
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .engine import OpinionConfig, Trajectory, run, threshold_project
from .graph import Graph
from .randomness import EventLog, replica_seeds
from .rules import RuleKind

CONSISTENT, INCONSISTENT = "consistent", "inconsistent"


def binomial_se(est: float, n: int) -> float:
    return math.sqrt(est * (1 - est) / n) if n > 0 else float("nan")


def _tables(g: Graph, rule: RuleKind):
    pool, plen = g.pool_table(self_inclusion=not rule.coins)
    fixed = np.zeros(g.vertex_count)
    for v, val in g.frozen.items():
        fixed[v] = val
    return pool, plen, g.active_vertices(), fixed


def _as_list(v) -> list[float]:
    return [float(a) for a in np.atleast_1d(v)]


@dataclass
class MarginalEstimate:
    graph: str
    vertex: int
    t: float
    level: float
    replicas: int
    estimate: float
    se: float
    seed: int
    rule: str = "median"

    def as_row(self) -> dict:
        return asdict(self)


def sample_values(g: Graph, rule: RuleKind | str, x: int, times, replicas: int, seed: int,
                  p: float | None = None) -> np.ndarray:
    """Opinion of ``x`` at each time for ``replicas`` independent runs, shape ``(R, T)``.

    Real-valued rules start from i.i.d. uniforms; binary rules from
    Bernoulli(``p``). Frozen vertices keep their boundary values.
    """
    rule = RuleKind.parse(rule)
    g._check_vertex(x)
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    times = np.asarray(_as_list(times), dtype=np.float64)
    if np.any(times < 0):
        raise ValueError("times must be >= 0")
    order = np.argsort(times)
    if rule.binary:
        if p is None or not 0.0 <= p <= 1.0:
            raise ValueError("binary rules need an initial density p in [0, 1]")
    pool, plen, active, fixed = _tables(g, rule)
    out = _kernels.sample_at_times(pool, plen, active, fixed, -1.0 if p is None else float(p),
                                   x, times[order], replica_seeds(seed, replicas))
    res = np.empty_like(out)
    res[:, order] = out
    return res


def estimate_marginals(g: Graph, rule: RuleKind | str, x: int, t_grid, levels,
                       replicas: int, seed: int) -> list[MarginalEstimate]:
    """Marginal estimates on a ``t_grid x levels`` grid.

    For real rules one batch of runs serves every threshold (``value <=
    alpha``). For binary rules each level is an initial density ``p``; the
    runs for different ``p`` share seeds, hence clocks.
    """
    rule = RuleKind.parse(rule)
    t_grid, levels = _as_list(t_grid), _as_list(levels)
    for a in levels:
        if not 0.0 <= a <= 1.0:
            raise ValueError(f"level {a} outside [0, 1]")
    out = []
    if rule.binary:
        for a in levels:
            vals = sample_values(g, rule, x, t_grid, replicas, seed, p=a)
            for k, t in enumerate(t_grid):
                est = float(np.mean(vals[:, k] == 1.0))
                out.append(MarginalEstimate(g.name, x, t, a, replicas, est,
                                            binomial_se(est, replicas), seed, rule.value))
    else:
        vals = sample_values(g, rule, x, t_grid, replicas, seed)
        for k, t in enumerate(t_grid):
            for a in levels:
                est = float(np.mean(vals[:, k] <= a))
                out.append(MarginalEstimate(g.name, x, t, a, replicas, est,
                                            binomial_se(est, replicas), seed, rule.value))
    return out


def estimate_marginal(g: Graph, rule: RuleKind | str, x: int, t: float, level: float,
                      replicas: int, seed: int) -> MarginalEstimate:
    """Fraction of replicas with ``value_at(x, t) <= level`` (real rules) or ``== 1`` (binary)."""
    return estimate_marginals(g, rule, x, [t], [level], replicas, seed)[0]


# pathwise checks on shared randomness

@dataclass
class CheckReport:
    passed: bool
    checks: int
    violation: dict | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def _threshold_flips(traj: Trajectory, p: float):
    old = traj.old <= p
    new = traj.new <= p
    keep = old != new
    return traj.times[keep], traj.vertices[keep], new[keep].astype(np.int64)


def check_coupling(g: Graph, log: EventLog, eta0: OpinionConfig, p_grid,
                   *, majority_update=None, median_traj: Trajectory | None = None) -> CheckReport:
    """Run median dynamics once and majority dynamics from each thresholded start
    on the same clocks; their trajectories must agree flip for flip.

    ``majority_update`` replaces the majority site rule (negative controls).
    """
    if eta0.binary:
        raise ValueError("check_coupling needs a real-valued initial configuration")
    med = median_traj if median_traj is not None else run(g, RuleKind.MEDIAN, eta0, log)
    checks = 0
    for p in _as_list(p_grid):
        maj = run(g, RuleKind.MAJORITY, threshold_project(eta0, p), log, update=majority_update)
        tt, tv, tn = _threshold_flips(med, p)
        n = min(len(tt), len(maj.times))
        same = ((tt[:n] == maj.times[:n]) & (tv[:n] == maj.vertices[:n])
                & (tn[:n] == maj.new[:n]))
        checks += 1
        if not same.all() or len(tt) != len(maj.times):
            i = int(np.argmin(same)) if not same.all() else n
            src = tt if (i < len(tt) and (i >= len(maj.times) or tt[i] <= maj.times[i])) else maj.times
            src_v = tv if src is tt else maj.vertices
            return CheckReport(False, checks, {"p": p, "time": float(src[i]), "vertex": int(src_v[i])})
    return CheckReport(True, checks)


def domination_swap(eta0: OpinionConfig, alpha: float, beta: float) -> OpinionConfig:
    """Exchange the opinion windows ``[0, alpha)`` and ``[beta, beta + alpha)``."""
    _check_domination_params(alpha, beta)
    v = eta0.values
    xi = v.copy()
    low = v < alpha
    high = (v >= beta) & (v < beta + alpha)
    xi[low] = v[low] + beta
    xi[high] = v[high] - beta
    return OpinionConfig(np.clip(xi, 0.0, 1.0))


def _check_domination_params(alpha: float, beta: float) -> None:
    if not 0.0 <= alpha < 0.5:
        raise ValueError("alpha must lie in [0, 1/2)")
    if beta < 0 or alpha + beta > 1:
        raise ValueError("need beta >= 0 and alpha + beta <= 1")
    if 0 < beta < alpha:
        raise ValueError("the windows [0, alpha) and [beta, beta + alpha) overlap; "
                         "need beta = 0 or beta >= alpha")


def check_domination(g: Graph, log: EventLog, alpha: float, beta: float,
                     eta0: OpinionConfig) -> CheckReport:
    """Pathwise check: whenever ``eta`` is in ``[0, alpha)``, the swapped copy
    ``xi`` run on the same clocks is in ``[beta, beta + alpha)``."""
    _check_domination_params(alpha, beta)
    xi0 = domination_swap(eta0, alpha, beta)
    ta = run(g, RuleKind.MEDIAN, eta0, log)
    tb = run(g, RuleKind.MEDIAN, xi0, log)
    eta = eta0.values.copy()
    xi = xi0.values.copy()
    top = beta + alpha

    def bad(v):
        return eta[v] < alpha and not (beta <= xi[v] < top)

    for v in range(len(eta)):
        if bad(v):
            return CheckReport(False, v + 1, {"time": 0.0, "vertex": v})
    checks = len(eta)
    merged = sorted([(t, 0, i) for i, t in enumerate(ta.times.tolist())]
                    + [(t, 1, i) for i, t in enumerate(tb.times.tolist())])
    k = 0
    while k < len(merged):
        t = merged[k][0]
        touched = set()
        while k < len(merged) and merged[k][0] == t:
            _, which, i = merged[k]
            if which == 0:
                eta[ta.vertices[i]] = ta.new[i]
                touched.add(int(ta.vertices[i]))
            else:
                xi[tb.vertices[i]] = tb.new[i]
                touched.add(int(tb.vertices[i]))
            k += 1
        for v in touched:
            checks += 1
            if bad(v):
                return CheckReport(False, checks, {"time": t, "vertex": v,
                                                   "eta": float(eta[v]), "xi": float(xi[v])})
    return CheckReport(True, checks)


# conjecture scans

@dataclass
class ScanResult:
    estimates: list[MarginalEstimate]
    verdict: str
    statistics: list[float] = field(default_factory=list)
    errors: list[float] = field(default_factory=list)


def monotonicity_scan(g: Graph, x: int, alpha: float, t_grid, replicas: int, seed: int,
                      rule: RuleKind | str = RuleKind.MEDIAN) -> ScanResult:
    """Estimate ``t -> P[eta_t(x) <= alpha]`` and flag increases above 3 pooled SE.

    ``statistics`` holds consecutive increments, ``errors`` their pooled SE.
    """
    if alpha > 0.5:
        raise ValueError("monotonicity is only expected for alpha <= 1/2")
    t_grid = sorted(_as_list(t_grid))
    est = estimate_marginals(g, rule, x, t_grid, [alpha], replicas, seed)
    inc = [b.estimate - a.estimate for a, b in zip(est, est[1:])]
    se = [math.hypot(a.se, b.se) for a, b in zip(est, est[1:])]
    ok = all(d <= 3 * s for d, s in zip(inc, se))
    return ScanResult(est, CONSISTENT if ok else INCONSISTENT, inc, se)


def unimodality_scan(g: Graph, x: int, t: float, p_grid, replicas: int, seed: int,
                     rule: RuleKind | str = RuleKind.MEDIAN) -> ScanResult:
    """Second divided differences of ``p -> P[eta_t(x) <= p]`` on ``[0, 1/2]``.

    All thresholds are read off one batch of runs, so the differences are
    multinomial bin-mass contrasts and their standard errors are exact.
    A difference below -3 SE makes the verdict "inconsistent".
    """
    rule = RuleKind.parse(rule)
    if rule.binary:
        raise ValueError("unimodality_scan thresholds a real-valued rule")
    p = sorted(_as_list(p_grid))
    if len(p) < 3:
        raise ValueError("p_grid needs at least 3 points")
    if p[0] < 0 or p[-1] > 0.5:
        raise ValueError("p_grid must lie in [0, 1/2]")
    if len(set(p)) != len(p):
        raise ValueError("p_grid has repeated points")
    vals = sample_values(g, rule, x, [t], replicas, seed)[:, 0]
    est = []
    for a in p:
        e = float(np.mean(vals <= a))
        est.append(MarginalEstimate(g.name, x, t, a, replicas, e, binomial_se(e, replicas),
                                    seed, rule.value))
    d2, errs = [], []
    for i in range(1, len(p) - 1):
        h1, h2 = p[i] - p[i - 1], p[i + 1] - p[i]
        b1 = est[i].estimate - est[i - 1].estimate
        b2 = est[i + 1].estimate - est[i].estimate
        a_, b_ = 2 / (h2 * (h1 + h2)), 2 / (h1 * (h1 + h2))
        d2.append(a_ * b2 - b_ * b1)
        var = (a_**2 * b2 * (1 - b2) + b_**2 * b1 * (1 - b1) + 2 * a_ * b_ * b1 * b2) / replicas
        errs.append(math.sqrt(max(var, 0.0)))
    ok = all(d >= -3 * s for d, s in zip(d2, errs))
    return ScanResult(est, CONSISTENT if ok else INCONSISTENT, d2, errs)


# fixation and limits

@dataclass
class FixationReport:
    flip_counts: np.ndarray
    last_flip_times: np.ndarray
    fixation_fraction: float
    fixation_se: float
    histogram: tuple[np.ndarray, np.ndarray]
    horizon: float
    window: float

    def summary(self) -> dict:
        return {"fixation_fraction": self.fixation_fraction, "fixation_se": self.fixation_se,
                "max_flips": int(self.flip_counts.max(initial=0)),
                "mean_flips": float(self.flip_counts.mean()) if self.flip_counts.size else 0.0,
                "horizon": self.horizon, "window": self.window}


def _fixation_from(counts, last, horizon, window, active, bins) -> FixationReport:
    if window > horizon:
        raise ValueError("window must not exceed the horizon")
    last_a = last[:, active]
    quiet = last_a <= horizon - window
    frac = float(quiet.mean()) if quiet.size else 1.0
    per_rep = quiet.mean(axis=1) if quiet.size else np.ones(1)
    se = float(per_rep.std(ddof=1) / math.sqrt(len(per_rep))) if len(per_rep) > 1 else 0.0
    flipped = last_a[last_a >= 0]
    hist = np.histogram(flipped, bins=bins, range=(0.0, horizon))
    return FixationReport(counts, last, frac, se, hist, horizon, window)


def fixation_report(trajectories: Sequence[Trajectory], window: float, bins: int = 20) -> FixationReport:
    """Flip counts, last-flip times and the fraction of vertices quiet in the trailing window."""
    if not trajectories:
        raise ValueError("need at least one trajectory")
    horizon = trajectories[0].horizon
    n = len(trajectories[0].initial)
    counts = np.stack([tr.flip_counts() for tr in trajectories])
    last = np.full((len(trajectories), n), -1.0)
    for r, tr in enumerate(trajectories):
        last[r, tr.vertices] = tr.times  # time-ordered, so the last write wins
    return _fixation_from(counts, last, horizon, window, np.arange(n), bins)


def fixation_scan(g: Graph, rule: RuleKind | str, horizon: float, window: float,
                  replicas: int, seed: int, p: float | None = None, bins: int = 20) -> FixationReport:
    """Fixation statistics from fresh replicas on ``g``.

    Runs sharing ``seed`` and differing only in ``horizon`` use identical
    clocks up to the shorter horizon, which makes horizon-doubling checks
    coupled.
    """
    rule = RuleKind.parse(rule)
    pool, plen, active, fixed = _tables(g, rule)
    pp = -1.0 if p is None else float(p)
    if rule.binary and p is None:
        raise ValueError("binary rules need an initial density p")
    counts, last = _kernels.flip_statistics(pool, plen, active, fixed, pp, float(horizon),
                                            replica_seeds(seed, replicas))
    return _fixation_from(counts, last, horizon, window, active, bins)


@dataclass
class IntervalCheck:
    lo: float
    hi: float
    estimate: float
    se: float
    bound: float
    passed: bool


@dataclass
class LimitHistogram:
    edges: np.ndarray
    counts: np.ndarray
    replicas: int
    kept: int
    excluded: int
    excluded_values: np.ndarray
    checks: list[IntervalCheck]
    tail_alphas: np.ndarray
    tail_ratios: np.ndarray
    side: int
    horizon: float
    window: float
    absorbed_fraction: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


DEFAULT_WINDOWS = ((0.0, 1.0), (0.4, 0.6), (0.45, 0.55), (0.0, 0.5), (0.5, 1.0),
                   (0.25, 0.75), (0.2, 0.4), (0.6, 0.8), (0.3, 0.5), (0.1, 0.4))


def limit_histogram(g: Graph, x: int, replicas: int, horizon: float, bins: int = 20,
                    window: float | None = None, seed: int = 0,
                    intervals=DEFAULT_WINDOWS, tail_alphas=(0.05, 0.1, 0.15, 0.2, 0.3)) -> LimitHistogram:
    """Law of the opinion at ``x`` at the horizon under median dynamics on a 2-d torus.

    A replica counts as fixated when ``x`` did not flip during the trailing
    ``window``; the rest are reported in ``excluded``. For every ``[lo,
    hi]`` in ``intervals`` the fixated mass plus 3 SE must reach ``(hi -
    lo)^4``. Also reports ``P[value <= a] / a^4`` for ``tail_alphas``
    without a verdict.
    """
    if g.labels is None or not all(isinstance(lab, tuple) and len(lab) == 2 for lab in g.labels):
        raise ValueError("limit_histogram expects a 2-dimensional lattice")
    g._check_vertex(x)
    if window is None:
        window = horizon / 4
    if not 0 < window <= horizon:
        raise ValueError("window must lie in (0, horizon]")
    rule = RuleKind.MEDIAN
    pool, plen, active, fixed = _tables(g, rule)
    nbr, nlen = g.neighbor_table()
    val, last, _flips, _still, _last_any, absorbed = _kernels.absorb_deterministic(
        pool, plen, nbr, nlen, active, fixed, -1.0, x, float(horizon), float(window),
        replica_seeds(seed, replicas))
    keep = last <= horizon - window
    kept = val[keep]
    n = len(kept)
    counts, edges = np.histogram(kept, bins=bins, range=(0.0, 1.0))
    checks = []
    for lo, hi in intervals:
        if not 0 <= lo < hi <= 1:
            raise ValueError(f"bad interval [{lo}, {hi}]")
        est = float(np.mean((kept >= lo) & (kept <= hi))) if n else 0.0
        se = binomial_se(est, n)
        bound = (hi - lo) ** 4
        checks.append(IntervalCheck(lo, hi, est, se, bound, bool(est + 3 * se >= bound)))
    ta = np.asarray(tail_alphas, dtype=float)
    ratios = np.array([np.mean(kept <= a) / a**4 if n else np.nan for a in ta])
    side = int(round(math.sqrt(g.vertex_count)))
    return LimitHistogram(edges, counts, replicas, n, replicas - n, val[~keep], checks, ta,
                          ratios, side, horizon, window, float(absorbed.mean()))


def absorption_scan(g: Graph, horizon: float, window: float, replicas: int, seed: int,
                    x: int = 0, p: float | None = None, rule: RuleKind | str = RuleKind.MEDIAN) -> dict:
    """Fixation statistics of a deterministic rule via the rejection-free kernel."""
    rule = RuleKind.parse(rule)
    if rule.coins:
        raise ValueError("absorption_scan handles the self-inclusion rules only")
    if rule.binary and p is None:
        raise ValueError("binary rules need an initial density p")
    pool, plen, active, fixed = _tables(g, rule)
    nbr, nlen = g.neighbor_table()
    _val, _last, _flips, still, last_any, absorbed = _kernels.absorb_deterministic(
        pool, plen, nbr, nlen, active, fixed, -1.0 if p is None else float(p), x,
        float(horizon), float(window), replica_seeds(seed, replicas))
    return {"graph": g.name, "horizon": horizon, "window": window, "replicas": replicas,
            "fixation_fraction": float(still.mean()),
            "fixation_se": float(still.std(ddof=1) / math.sqrt(replicas)) if replicas > 1 else 0.0,
            "absorbed_fraction": float(absorbed.mean()),
            "mean_last_flip": float(last_any.mean()), "max_last_flip": float(last_any.max())}


# energy

def local_energy(values, g: Graph, x: int) -> float:
    """Sum of ``|value(y) - value(x)|`` over the neighbors ``y`` of ``x``."""
    return float(sum(abs(values[y] - values[x]) for y in g.neighbors(x)))


@dataclass
class EnergyTrace:
    """Energy at ``x`` along one trajectory, updated at every flip of ``x`` or a neighbor."""

    vertex: int
    times: np.ndarray
    energies: np.ndarray
    own_times: np.ndarray
    own_dh: np.ndarray
    eps: np.ndarray
    n_eps: np.ndarray


def energy_trace(g: Graph, traj: Trajectory, x: int, eps_grid) -> EnergyTrace:
    vals = traj.initial.values.astype(np.float64).copy()
    watch = set(g.neighbors(x)) | {x}
    times, energies, own_t, own_dh = [0.0], [local_energy(vals, g, x)], [], []
    for t, v, new in zip(traj.times.tolist(), traj.vertices.tolist(), traj.new.tolist()):
        if v not in watch:
            vals[v] = new
            continue
        before = energies[-1]
        vals[v] = new
        h = local_energy(vals, g, x)
        times.append(t)
        energies.append(h)
        if v == x:
            own_t.append(t)
            own_dh.append(h - before)
    eps = np.asarray(_as_list(eps_grid))
    dh = np.asarray(own_dh)
    n_eps = np.array([int(np.sum(np.abs(dh) >= e)) for e in eps])
    return EnergyTrace(x, np.asarray(times), np.asarray(energies), np.asarray(own_t), dh, eps, n_eps)


@dataclass
class SlopeFit:
    slope: float
    ci_low: float
    ci_high: float
    t_min: float


@dataclass
class EnergyReport:
    eps: np.ndarray
    mean_n_eps: np.ndarray
    se_n_eps: np.ndarray
    bound: np.ndarray
    max_own_dh: float
    mean_flips: float
    times: np.ndarray
    mean_energy: np.ndarray
    mean_deviation: np.ndarray
    energy_slope: SlopeFit
    deviation_slope: SlopeFit
    replicas: int
    horizon: float
    dimension: int

    @property
    def bound_ok(self) -> np.ndarray:
        return self.mean_n_eps - 3 * self.se_n_eps <= self.bound

    @property
    def energy_ok(self) -> bool:
        return self.max_own_dh <= ENERGY_ROUNDOFF


ENERGY_ROUNDOFF = 1e-12


def loglog_slope(times, curves: np.ndarray, t_min: float, boot: int = 200, seed: int = 0) -> SlopeFit:
    """Least-squares slope of ``log mean(curve)`` against ``log t`` for ``t >= t_min``,
    with a 95% bootstrap interval over replicas (rows of ``curves``)."""
    times = np.asarray(times)
    sel = times >= t_min
    lt = np.log(times[sel])

    def fit(mean):
        m = mean[sel]
        if np.any(m <= 0):
            return float("nan")
        return float(np.polyfit(lt, np.log(m), 1)[0])

    slope = fit(curves.mean(axis=0))
    rng = np.random.default_rng(seed)
    R = curves.shape[0]
    boots = [fit(curves[rng.integers(0, R, R)].mean(axis=0)) for _ in range(boot)]
    lo, hi = np.nanpercentile(boots, [2.5, 97.5]) if boot else (np.nan, np.nan)
    return SlopeFit(slope, float(lo), float(hi), t_min)


def energy_report(g: Graph, x: int, replicas: int, horizon: float, eps_grid, seed: int,
                  rule: RuleKind | str = RuleKind.MEDIAN_COINS, times=None,
                  t_min: float | None = None) -> EnergyReport:
    """Energy statistics at ``x`` on an even-degree torus.

    ``N_eps`` counts the flips of ``x`` whose energy change is at least
    ``eps`` in absolute value; its mean is compared with ``dim / eps``.
    Mean energy and mean ``|value - 1/2|`` on the ``times`` grid get
    log-log slope fits (reported, not judged).
    """
    rule = RuleKind.parse(rule)
    if rule.binary:
        raise ValueError("energy_report needs a real-valued rule")
    if g.labels is None or not isinstance(g.labels[0], tuple):
        raise ValueError("energy_report expects a lattice with coordinate labels")
    dim = len(g.labels[0])
    if any(g.degree(v) % 2 for v in range(g.vertex_count)):
        raise ValueError("energy_report expects an even-degree graph")
    eps = np.asarray(_as_list(eps_grid))
    if np.any(eps <= 0):
        raise ValueError("eps must be > 0")
    if times is None:
        times = np.unique(np.concatenate([[0.0], np.geomspace(0.5, horizon, 24)]))
    times = np.asarray(sorted(set(_as_list(times)) | {float(horizon)}))
    if times[0] < 0 or times[-1] > horizon:
        raise ValueError("time grid must lie in [0, horizon]")
    pool, plen, active, fixed = _tables(g, rule)
    nbr, nlen = g.neighbor_table()
    n_eps, max_dh, flips, h_at, dev_at = _kernels.energy_trace(
        pool, plen, nbr, nlen, active, fixed, -1.0, x, eps, times, replica_seeds(seed, replicas))
    mean = n_eps.mean(axis=0)
    se = n_eps.std(axis=0, ddof=1) / math.sqrt(replicas) if replicas > 1 else np.zeros_like(mean)
    if t_min is None:
        t_min = max(1.0, horizon / 20)
    return EnergyReport(eps, mean, se, dim / eps, float(max_dh.max()), float(flips.mean()), times,
                        h_at.mean(axis=0), dev_at.mean(axis=0),
                        loglog_slope(times, h_at, t_min, seed=seed),
                        loglog_slope(times, dev_at, t_min, seed=seed + 1),
                        replicas, horizon, dim)


# sequential counterexample

def bipartite_sequence_mc(m: int, p: float, samples: int, seed: int) -> dict:
    """Monte Carlo of the sequential schedule on ``K_{3,m}`` via :func:`run_sequential`.

    Returns the estimated ``P[x = 1]`` after every step for ``x = (1, 1)``.
    """
    from .engine import run_sequential
    from .graph import build_complete_bipartite

    g = build_complete_bipartite(3, m)
    x = g.index_of((1, 1))
    schedule = [x] + [g.index_of((2, j)) for j in range(1, m + 1)] + [x]
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    init = (rng.random((samples, g.vertex_count)) < p).astype(np.int8)
    steps = run_sequential(g, schedule, init)
    est = np.array([s[:, x].mean() for s in steps])
    return {"estimates": est, "se": np.sqrt(est * (1 - est) / samples), "schedule": schedule}


def sequence_verdict(seq) -> str:
    """"monotone" if the sequence never changes direction, else "non-monotone"."""
    d = np.diff(np.asarray(seq, dtype=float))
    d = d[d != 0]
    return "monotone" if np.all(d > 0) or np.all(d < 0) else "non-monotone"
