"""Finite graphs for median and majority dynamics.

Vertices are dense integer ids ``0..n-1``. Adjacency is stored without
self-entries; the convention that an even-degree vertex polls itself is
applied at query time by :func:`effective_neighborhood`.

Infinite lattices are not simulated. For the growth functional they are
described symbolically by sphere-size functions (see
:func:`integer_lattice_spheres`).
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from math import comb
from types import MappingProxyType
from typing import Callable, Mapping, Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph.

    ``frozen`` maps vertex ids to opinions that never update (boundary
    vertices of interval experiments). ``labels`` are optional coordinate
    tuples; they are metadata only.
    """

    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple | None = None
    frozen: Mapping[int, float] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        n = len(self.adjacency)
        for x, nbrs in enumerate(self.adjacency):
            if len(set(nbrs)) != len(nbrs):
                raise ValueError(f"duplicate neighbor entries at vertex {x}")
            for y in nbrs:
                if not 0 <= y < n:
                    raise ValueError(f"vertex {x} lists out-of-range neighbor {y}")
                if y == x:
                    raise ValueError(f"explicit self-loop at vertex {x}")
                if x not in self.adjacency[y]:
                    raise ValueError(f"asymmetric edge {x}->{y}")
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("labels must have one entry per vertex")
        for v in self.frozen:
            if not 0 <= v < n:
                raise ValueError(f"frozen vertex {v} out of range")
        object.__setattr__(self, "frozen", MappingProxyType(dict(self.frozen)))

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def degree(self, x: int) -> int:
        self._check_vertex(x)
        return len(self.adjacency[x])

    def neighbors(self, x: int) -> tuple[int, ...]:
        self._check_vertex(x)
        return self.adjacency[x]

    def is_frozen(self, x: int) -> bool:
        return x in self.frozen

    def active_vertices(self) -> np.ndarray:
        """Ids of vertices that carry a clock, in increasing order."""
        return np.array([x for x in range(self.vertex_count) if x not in self.frozen],
                        dtype=np.int64)

    def index_of(self, label) -> int:
        """Vertex id carrying coordinate ``label``."""
        if self.labels is None:
            raise ValueError("graph has no labels")
        try:
            return self.labels.index(tuple(label) if isinstance(label, list) else label)
        except ValueError:
            raise KeyError(f"no vertex labelled {label!r}") from None

    def _check_vertex(self, x: int) -> None:
        if not (isinstance(x, (int, np.integer)) and 0 <= x < self.vertex_count):
            raise IndexError(f"invalid vertex id {x!r}")

    # dense tables consumed by the compiled kernels
    def neighbor_table(self) -> tuple[np.ndarray, np.ndarray]:
        """Padded ``(n, max_degree)`` neighbor array and per-vertex degrees."""
        n = self.vertex_count
        width = max((len(a) for a in self.adjacency), default=0)
        table = np.full((n, max(width, 1)), -1, dtype=np.int64)
        lens = np.zeros(n, dtype=np.int64)
        for x, nbrs in enumerate(self.adjacency):
            table[x, : len(nbrs)] = nbrs
            lens[x] = len(nbrs)
        return table, lens

    def pool_table(self, self_inclusion: bool = True) -> tuple[np.ndarray, np.ndarray]:
        """Padded table of the vertices polled at each site.

        With ``self_inclusion`` the pool is :func:`effective_neighborhood`;
        otherwise it is the plain neighborhood (coin-flip rules).
        """
        n = self.vertex_count
        pools = [effective_neighborhood(self, x) if self_inclusion else list(self.adjacency[x])
                 for x in range(n)]
        width = max((len(p) for p in pools), default=0)
        table = np.full((n, max(width, 1)), -1, dtype=np.int64)
        lens = np.zeros(n, dtype=np.int64)
        for x, p in enumerate(pools):
            table[x, : len(p)] = p
            lens[x] = len(p)
        return table, lens

    # JSON adjacency-list interchange
    def to_dict(self) -> dict:
        d = {"n": self.vertex_count, "adj": [list(a) for a in self.adjacency],
             "frozen": {str(k): v for k, v in self.frozen.items()}}
        if self.labels is not None:
            d["labels"] = [list(lab) if isinstance(lab, tuple) else lab for lab in self.labels]
        if self.name:
            d["name"] = self.name
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "Graph":
        adj = tuple(tuple(int(y) for y in a) for a in d["adj"])
        if int(d["n"]) != len(adj):
            raise ValueError(f"'n'={d['n']} does not match {len(adj)} adjacency rows")
        labels = d.get("labels")
        if labels is not None:
            labels = tuple(tuple(lab) if isinstance(lab, list) else lab for lab in labels)
        frozen = {int(k): float(v) for k, v in d.get("frozen", {}).items()}
        return cls(adj, labels=labels, frozen=frozen, name=d.get("name", ""))

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        return cls.from_dict(json.loads(text))


def _from_edges(n: int, edges, **kw) -> Graph:
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    return Graph(tuple(tuple(sorted(a)) for a in adj), **kw)


def build_complete(n: int) -> Graph:
    """Complete graph on ``n`` vertices."""
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return _from_edges(n, itertools.combinations(range(n), 2), name=f"K{n}")


def build_complete_bipartite(a: int, b: int) -> Graph:
    """Complete bipartite graph with classes labelled ``(1, i)`` and ``(2, j)``, 1-based.

    Class-1 vertices get ids ``0..a-1``, class-2 vertices ``a..a+b-1``.
    """
    if a < 1 or b < 1:
        raise ValueError("both classes must be non-empty")
    labels = tuple([(1, i) for i in range(1, a + 1)] + [(2, j) for j in range(1, b + 1)])
    edges = [(i, a + j) for i in range(a) for j in range(b)]
    return _from_edges(a + b, edges, labels=labels, name=f"K{a},{b}")


def build_torus(side: int, dim: int = 2) -> Graph:
    """Periodic lattice ``(Z/side)^dim``; labels are coordinate tuples in row-major order."""
    if dim not in (1, 2, 3):
        raise ValueError("dim must be 1, 2 or 3")
    if side < 3:
        raise ValueError("side must be >= 3 (smaller tori create parallel edges)")
    coords = list(itertools.product(range(side), repeat=dim))
    index = {c: i for i, c in enumerate(coords)}
    edges = []
    for c in coords:
        for axis in range(dim):
            nxt = list(c)
            nxt[axis] = (nxt[axis] + 1) % side
            edges.append((index[c], index[tuple(nxt)]))
    return _from_edges(len(coords), edges, labels=tuple(coords), name=f"T{side}^{dim}")


def build_cycle(n: int) -> Graph:
    """Cycle ``C_n`` (the one-dimensional torus)."""
    g = build_torus(n, 1)
    return Graph(g.adjacency, labels=g.labels, name=f"C{n}")


def build_path_with_frozen_boundary(k: int, left: float, right: float) -> Graph:
    """Path of ``k`` updating vertices between two frozen endpoints.

    Vertex 0 and vertex ``k+1`` are frozen at ``left`` and ``right``; the
    interior vertices are ``1..k``.
    """
    if k < 1:
        raise ValueError("need at least one interior vertex")
    for v in (left, right):
        if not 0.0 <= v <= 1.0:
            raise ValueError("frozen opinions must lie in [0, 1]")
    n = k + 2
    return _from_edges(n, [(i, i + 1) for i in range(n - 1)],
                       labels=tuple(range(n)), frozen={0: left, n - 1: right},
                       name=f"P{k}[{left},{right}]")


def effective_neighborhood(g: Graph, x: int) -> list[int]:
    """Vertices polled by ``x``: its neighbors, plus ``x`` when its degree is even.

    The result always has odd size, so the median is unique.
    """
    nbrs = g.neighbors(x)
    if len(nbrs) % 2 == 0:
        return sorted((*nbrs, x))
    return sorted(nbrs)


def sphere_sizes(g: Graph, x: int, r_max: int) -> np.ndarray:
    """``n_r(G, x)`` for ``r = 0..r_max`` by breadth-first search."""
    g._check_vertex(x)
    dist = {x: 0}
    queue = deque([x])
    while queue:
        v = queue.popleft()
        if dist[v] >= r_max:
            continue
        for w in g.adjacency[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return np.bincount(np.fromiter(dist.values(), dtype=np.int64), minlength=r_max + 1)


def integer_lattice_spheres(dim: int) -> Callable[[int], int]:
    """Sphere sizes of ``Z^dim`` in graph distance: ``sum_k 2^k C(dim,k) C(r-1,k-1)``."""
    if dim < 1:
        raise ValueError("dim must be >= 1")

    def n_r(r: int) -> int:
        if r == 0:
            return 1
        return sum(2**k * comb(dim, k) * comb(r - 1, k - 1) for k in range(1, dim + 1))

    return n_r


def regular_tree_spheres(degree: int) -> Callable[[int], int]:
    """Sphere sizes of the infinite ``degree``-regular tree."""
    return lambda r: 1 if r == 0 else degree * (degree - 1) ** (r - 1)


def growth_functional(g: Graph | Callable[[int], int], x: int | None, d: int, r_max: int) -> float:
    """Truncated growth series ``sum_{r=1}^{r_max} ((d+1)/(d-1))^{-r} n_r``.

    ``g`` is either a finite :class:`Graph` (spheres from BFS around ``x``)
    or a sphere-size function ``r -> n_r`` describing an infinite lattice,
    in which case ``x`` is ignored. ``d`` bounds the maximum degree.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    q = (d - 1) / (d + 1)
    if isinstance(g, Graph):
        n = sphere_sizes(g, x, r_max)
        terms = [q**r * n[r] for r in range(1, r_max + 1)]
    else:
        terms = [q**r * g(r) for r in range(1, r_max + 1)]
    return float(np.sum(terms))


def growth_tail(spheres: Callable[[int], int], d: int, r_max: int, tol: float = 1e-15,
                r_limit: int = 100_000) -> float:
    """Sum of the omitted terms ``r > r_max`` of the growth series.

    Summation stops once a term falls below ``tol``; returns ``inf`` when
    terms are still not decaying at ``r_limit`` (e.g. exponential growth).
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    q = (d - 1) / (d + 1)
    total = 0.0
    r = r_max + 1
    while r <= r_limit:
        try:
            term = q**r * spheres(r)
        except OverflowError:
            return float("inf")
        total += term
        if term < tol and r > 2 * r_max + 10:
            return total
        r += 1
    return float("inf")


def coordinate_grid(g: Graph) -> tuple[int, int, np.ndarray]:
    """Map a 2-d labelled lattice to ``(rows, cols, order)`` with row-major vertex order."""
    if g.labels is None or not all(isinstance(lab, tuple) and len(lab) == 2 for lab in g.labels):
        raise ValueError("graph is not a 2-dimensional labelled lattice")
    rows = 1 + max(lab[0] for lab in g.labels)
    cols = 1 + max(lab[1] for lab in g.labels)
    if rows * cols != g.vertex_count:
        raise ValueError("labels do not tile a rectangle")
    order = np.empty(rows * cols, dtype=np.int64)
    for v, (i, j) in enumerate(g.labels):
        order[i * cols + j] = v
    return rows, cols, order


def suite(names: Sequence[str]) -> list[Graph]:
    """Build graphs from short names such as ``"K5"``, ``"C200"``, ``"T10^2"``, ``"K3,5"``."""
    return [parse_graph_name(s) for s in names]


def parse_graph_name(s: str) -> Graph:
    s = s.strip()
    if s.startswith("K") and "," in s:
        a, b = s[1:].split(",")
        return build_complete_bipartite(int(a), int(b))
    if s.startswith("K"):
        return build_complete(int(s[1:]))
    if s.startswith("C"):
        return build_cycle(int(s[1:]))
    if s.startswith("T"):
        side, _, dim = s[1:].partition("^")
        return build_torus(int(side), int(dim or 2))
    raise ValueError(f"unrecognised graph name {s!r}")
