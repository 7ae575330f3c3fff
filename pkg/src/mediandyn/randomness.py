"""Seeded realizations of the rate-one Poisson clocks and tie-break coins.

Every non-frozen vertex owns two independent streams derived from the
global seed by ``SeedSequence(seed, spawn_key=(x, k))``: ``k = 0`` drives
its exponential inter-arrival times, ``k = 1`` its coins. Adding vertices
or extending the horizon therefore leaves the existing rings untouched,
which keeps couplings stable across graph sizes and horizons.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .graph import Graph

_CLOCK, _COIN = 0, 1


@dataclass(frozen=True, eq=False)
class EventLog:
    """Time-ordered clock rings ``(times[i], vertices[i])`` with one fair coin per ring."""

    horizon: float
    times: np.ndarray
    vertices: np.ndarray
    coins: np.ndarray
    seed: int
    vertex_count: int

    def __post_init__(self):
        if not (len(self.times) == len(self.vertices) == len(self.coins)):
            raise ValueError("times, vertices and coins must have equal length")
        if len(self.times) and np.any(np.diff(self.times) <= 0):
            raise ValueError("event times must be strictly increasing")
        for arr in (self.times, self.vertices, self.coins):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.times)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EventLog):
            return NotImplemented
        return (self.horizon == other.horizon and self.seed == other.seed
                and self.vertex_count == other.vertex_count
                and np.array_equal(self.times, other.times)
                and np.array_equal(self.vertices, other.vertices)
                and np.array_equal(self.coins, other.coins))

    def ring_counts(self) -> np.ndarray:
        return np.bincount(self.vertices, minlength=self.vertex_count)

    def to_dict(self) -> dict:
        return {"horizon": self.horizon, "seed": self.seed, "n": self.vertex_count,
                "times": self.times.tolist(), "vertices": self.vertices.tolist(),
                "coins": self.coins.tolist()}

    def to_json(self) -> str:
        # repr round-trips float64 exactly
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "EventLog":
        return cls(horizon=float(d["horizon"]),
                   times=np.asarray(d["times"], dtype=np.float64),
                   vertices=np.asarray(d["vertices"], dtype=np.int64),
                   coins=np.asarray(d["coins"], dtype=np.uint8),
                   seed=int(d["seed"]), vertex_count=int(d["n"]))

    @classmethod
    def from_json(cls, text: str) -> "EventLog":
        return cls.from_dict(json.loads(text))

    def save(self, path) -> None:
        np.savez(path, horizon=self.horizon, times=self.times, vertices=self.vertices,
                 coins=self.coins, seed=self.seed, n=self.vertex_count)

    @classmethod
    def load(cls, path) -> "EventLog":
        with np.load(path) as z:
            return cls(horizon=float(z["horizon"]), times=z["times"].copy(),
                       vertices=z["vertices"].copy(), coins=z["coins"].copy(),
                       seed=int(z["seed"]), vertex_count=int(z["n"]))


def vertex_stream(seed: int, x: int, kind: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(x, kind)))


def vertex_ring_times(seed: int, x: int, horizon: float) -> np.ndarray:
    """Ring times of vertex ``x`` in ``(0, horizon]``; prefix-stable in ``horizon``."""
    rng = vertex_stream(seed, x, _CLOCK)
    chunk = max(8, int(horizon * 1.5) + 8)
    out = []
    t = 0.0
    while True:
        gaps = rng.exponential(1.0, size=chunk)
        times = t + np.cumsum(gaps)
        keep = times[times <= horizon]
        out.append(keep)
        if len(keep) < chunk:
            break
        t = times[-1]
    return np.concatenate(out)


def sample_event_log(g: Graph, horizon: float, seed: int) -> EventLog:
    """Sample every clock ring of the non-frozen vertices of ``g`` up to ``horizon``."""
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    seed = int(seed)
    times, verts, coins = [], [], []
    for x in g.active_vertices():
        tx = vertex_ring_times(seed, int(x), horizon)
        times.append(tx)
        verts.append(np.full(len(tx), x, dtype=np.int64))
        coins.append(vertex_stream(seed, int(x), _COIN).integers(0, 2, size=len(tx), dtype=np.uint8))
    if times:
        t = np.concatenate(times)
        order = np.argsort(t, kind="stable")
        t, v, c = t[order], np.concatenate(verts)[order], np.concatenate(coins)[order]
    else:
        t = np.empty(0)
        v = np.empty(0, dtype=np.int64)
        c = np.empty(0, dtype=np.uint8)
    return EventLog(horizon=float(horizon), times=t, vertices=v, coins=c, seed=seed,
                    vertex_count=g.vertex_count)


def first_ring_time(log: EventLog, x: int) -> float | None:
    """Earliest ring of ``x`` in the log, or ``None``."""
    if not 0 <= x < log.vertex_count:
        raise IndexError(f"invalid vertex id {x}")
    hits = np.flatnonzero(log.vertices == x)
    return float(log.times[hits[0]]) if len(hits) else None


def replica_seeds(seed: int, replicas: int) -> np.ndarray:
    """Independent 32-bit seeds, one per replica, derived from a master seed."""
    return np.random.SeedSequence(int(seed)).generate_state(replicas, dtype=np.uint32)
