"""Event-driven evolution of opinion configurations.

:func:`run` is the reference implementation: it walks an :class:`EventLog`
ring by ring and records every change of opinion. Bulk Monte Carlo goes
through :mod:`mediandyn._kernels`, whose update step is checked against
this module on shared event logs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from .graph import Graph
from .randomness import EventLog
from .rules import (RuleKind, majority_update, median_coins_update, median_update,
                    pool_vertices, ztgd_update)


@dataclass(frozen=True, eq=False)
class OpinionConfig:
    """Vertex-indexed opinions; reals in [0, 1] or bits."""

    values: np.ndarray
    binary: bool = False

    def __post_init__(self):
        v = np.array(self.values, dtype=np.int64 if self.binary else np.float64)
        if v.ndim != 1:
            raise ValueError("configuration must be a flat vertex-indexed array")
        if self.binary:
            if np.any((v != 0) & (v != 1)):
                raise ValueError("binary configuration has entries outside {0, 1}")
        elif np.any((v < 0) | (v > 1)) or np.any(np.isnan(v)):
            raise ValueError("real configuration has entries outside [0, 1]")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OpinionConfig):
            return NotImplemented
        return self.binary == other.binary and np.array_equal(self.values, other.values)

    def to_array(self) -> np.ndarray:
        return self.values.copy()


def init_uniform(g: Graph, seed: int) -> OpinionConfig:
    """I.i.d. Uniform[0, 1] opinions on non-frozen vertices; frozen ones keep their value."""
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    vals = rng.random(g.vertex_count)
    for v, val in g.frozen.items():
        vals[v] = val
    return OpinionConfig(vals)


def init_bernoulli(g: Graph, p: float, seed: int) -> OpinionConfig:
    """I.i.d. Bernoulli(``p``) bits on non-frozen vertices."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    vals = (rng.random(g.vertex_count) < p).astype(np.int64)
    for v, val in g.frozen.items():
        vals[v] = int(val)
    return OpinionConfig(vals, binary=True)


def threshold_project(c: OpinionConfig, p: float) -> OpinionConfig:
    """Bit 1 where the opinion is at most ``p``."""
    if c.binary:
        raise ValueError("threshold_project expects a real-valued configuration")
    if not 0.0 <= p <= 1.0:
        raise ValueError("threshold p must lie in [0, 1]")
    return OpinionConfig((c.values <= p).astype(np.int64), binary=True)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Piecewise-constant path stored as its initial state plus the list of flips.

    A flip is a ring that changed the opinion; ``rings`` counts all rings,
    including the ones that left the opinion unchanged.
    """

    initial: OpinionConfig
    times: np.ndarray
    vertices: np.ndarray
    old: np.ndarray
    new: np.ndarray
    horizon: float
    rings: int = 0

    def __len__(self) -> int:
        return len(self.times)

    @cached_property
    def _by_vertex(self) -> dict[int, np.ndarray]:
        order = np.argsort(self.vertices, kind="stable")
        verts = self.vertices[order]
        cuts = np.flatnonzero(np.diff(verts)) + 1
        return {int(verts[grp[0]]): order[grp]
                for grp in np.split(np.arange(len(verts)), cuts) if len(grp)}

    def flip_indices(self, x: int) -> np.ndarray:
        """Indices into the flip arrays of the flips at ``x``, in time order."""
        return self._by_vertex.get(int(x), np.empty(0, dtype=np.int64))

    def flip_counts(self) -> np.ndarray:
        return np.bincount(self.vertices, minlength=len(self.initial))

    def snapshot(self, t: float) -> OpinionConfig:
        self._check_time(t)
        vals = self.initial.values.copy()
        k = np.searchsorted(self.times, t, side="right")
        vals[self.vertices[:k]] = self.new[:k]  # later flips overwrite earlier ones
        return OpinionConfig(vals, binary=self.initial.binary)

    def _check_time(self, t: float) -> None:
        if not 0.0 <= t <= self.horizon:
            raise ValueError(f"t={t} outside [0, {self.horizon}]")

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["time", "vertex", "old", "new"])
            for row in zip(self.times.tolist(), self.vertices.tolist(),
                           self.old.tolist(), self.new.tolist()):
                w.writerow([repr(row[0]), row[1], repr(row[2]), repr(row[3])])


def value_at(traj: Trajectory, x: int, t: float):
    """Opinion of ``x`` at time ``t``."""
    traj._check_time(t)
    idx = traj.flip_indices(x)
    k = np.searchsorted(traj.times[idx], t, side="right")
    if k == 0:
        return traj.initial.values[x]
    return traj.new[idx[k - 1]]


def last_flip_time(traj: Trajectory, x: int) -> float | None:
    idx = traj.flip_indices(x)
    return float(traj.times[idx[-1]]) if len(idx) else None


UpdateFn = Callable[[Graph, list, int, int], object]


def _default_update(g: Graph, rule: RuleKind) -> UpdateFn:
    pools = [pool_vertices(g, rule, x) for x in range(g.vertex_count)]

    def update(g, vals, x, coin):
        pool = [vals[y] for y in pools[x]]
        if not pool:
            return vals[x]
        if len(pool) % 2:
            return majority_update(pool) if rule.binary else median_update(pool)
        if rule.binary:
            return ztgd_update(pool, vals[x], coin)
        return median_coins_update(pool, coin)

    return update


def run(g: Graph, rule: RuleKind | str, init: OpinionConfig, log: EventLog,
        *, update: UpdateFn | None = None) -> Trajectory:
    """Apply ``rule`` at every ring of ``log``, starting from ``init``.

    ``update(g, values, x, coin)`` may replace the rule's site update; it is
    used to inject deliberately broken rules in negative controls.
    """
    rule = RuleKind.parse(rule)
    if rule.binary != init.binary:
        raise ValueError(f"rule {rule.value} needs a {'binary' if rule.binary else 'real'} "
                         "configuration")
    if log.vertex_count != g.vertex_count or len(init) != g.vertex_count:
        raise ValueError("event log, configuration and graph sizes disagree")
    if g.frozen and np.isin(log.vertices, list(g.frozen)).any():
        raise ValueError("event log rings a frozen vertex; it was not sampled on this graph")
    if update is None:
        update = _default_update(g, rule)

    vals = init.values.tolist()
    times, verts, olds, news = [], [], [], []
    for t, x, coin in zip(log.times.tolist(), log.vertices.tolist(), log.coins.tolist()):
        new = update(g, vals, x, coin)
        if new != vals[x]:
            times.append(t)
            verts.append(x)
            olds.append(vals[x])
            news.append(new)
            vals[x] = new
    dtype = np.int64 if init.binary else np.float64
    return Trajectory(initial=init, times=np.array(times, dtype=np.float64),
                      vertices=np.array(verts, dtype=np.int64),
                      old=np.array(olds, dtype=dtype), new=np.array(news, dtype=dtype),
                      horizon=log.horizon, rings=len(log))


def run_sequential(g: Graph, schedule: Sequence[int], init,
                   coin_stream: Iterable | None = None, tie_break: str = "self") -> list[np.ndarray]:
    """Update the scheduled vertices one at a time by majority.

    ``init`` is a binary :class:`OpinionConfig` or an integer array of shape
    ``(n,)`` or ``(replicas, n)``; batches are updated in lock step. With
    ``tie_break="coins"`` even-degree vertices poll only their neighbors and
    an exact tie takes the next value from ``coin_stream`` (a bit or an array
    of bits per replica). Returns the configuration before the first and
    after every step.
    """
    if tie_break not in ("self", "coins"):
        raise ValueError("tie_break must be 'self' or 'coins'")
    vals = np.array(init.values if isinstance(init, OpinionConfig) else init, dtype=np.int8)
    if vals.shape[-1] != g.vertex_count:
        raise ValueError("configuration size does not match the graph")
    if np.any((vals != 0) & (vals != 1)):
        raise ValueError("run_sequential expects binary opinions")
    for v in schedule:
        g._check_vertex(v)
    rule = RuleKind.ZTGD if tie_break == "coins" else RuleKind.MAJORITY
    coins = iter(coin_stream) if coin_stream is not None else None

    out = [vals.copy()]
    for v in schedule:
        pool = pool_vertices(g, rule, v)
        m = len(pool)
        if m:
            ones = vals[..., pool].sum(axis=-1, dtype=np.int64)
            new = (2 * ones > m).astype(np.int8)
            if m % 2 == 0:
                if coins is None:
                    raise ValueError(f"vertex {v} needs a tie-break coin but no coin_stream was given")
                coin = np.asarray(next(coins), dtype=np.int8)
                new = np.where(2 * ones == m, coin, new).astype(np.int8)
            vals[..., v] = new
        out.append(vals.copy())
    return out
