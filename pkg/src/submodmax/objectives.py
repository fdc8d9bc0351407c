"""Graphs, the maxcut and revenue-maximization objectives, and graph I/O."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .oracle import ValueOracle


class GraphError(ValueError):
    pass


class EdgeListError(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph on vertices ``0..n-1``.

    ``adjacency[u]`` lists ``(v, w)`` pairs; every edge is stored in both
    directions with the same weight.  ``labels`` keeps the original vertex
    labels when the graph was read from a file.
    """

    n: int
    adjacency: tuple[tuple[tuple[int, float], ...], ...]
    labels: tuple[int, ...] | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple], labels: Iterable[int] | None = None) -> "Graph":
        if n < 0:
            raise GraphError("vertex count must be >= 0")
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for edge in edges:
            u, v = int(edge[0]), int(edge[1])
            w = float(edge[2]) if len(edge) > 2 else 1.0
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (w > 0 and math.isfinite(w)):
                raise GraphError(f"edge ({u}, {v}) has non-positive weight {w}")
            key = (min(u, v), max(u, v))
            if key in seen:
                continue
            seen.add(key)
            adj[u].append((v, w))
            adj[v].append((u, w))
        return cls(n, tuple(tuple(a) for a in adj), tuple(labels) if labels is not None else None)

    def edges(self) -> list[tuple[int, int, float]]:
        """Each undirected edge once as ``(u, v, w)`` with ``u < v``."""
        return [(u, v, w) for u in range(self.n) for v, w in self.adjacency[u] if u < v]

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def is_unit_weight(self) -> bool:
        return all(w == 1.0 for a in self.adjacency for _, w in a)


@dataclass(frozen=True)
class RevMaxParams:
    """``w[(i, j)]`` is the influence of buyer ``j`` on buyer ``i``."""

    w: Mapping[tuple[int, int], float]
    alpha: tuple[float, ...]

    def validate(self, g: Graph) -> None:
        if len(self.alpha) != g.n:
            raise GraphError(f"alpha has {len(self.alpha)} entries for {g.n} vertices")
        for a in self.alpha:
            if not 0.0 < a < 1.0:
                raise GraphError(f"alpha {a} outside (0, 1)")
        for i in range(g.n):
            for j, _ in g.adjacency[i]:
                if (i, j) not in self.w:
                    raise GraphError(f"missing revmax weight for directed edge ({i}, {j})")
                if not 0.0 < self.w[(i, j)] < 1.0:
                    raise GraphError(f"weight w[{i},{j}] = {self.w[(i, j)]} outside (0, 1)")


class MaxCut:
    """f(S) = total weight of edges with exactly one endpoint in S."""

    name = "maxcut"

    def __init__(self, g: Graph):
        self.graph = g
        self.n = g.n
        self._adj = g.adjacency
        self._deg = [sum(w for _, w in a) for a in g.adjacency]

    def value(self, members) -> float:
        inside = members if isinstance(members, (set, frozenset)) else set(members)
        adj = self._adj
        total = 0.0
        for i in sorted(inside):
            for j, w in adj[i]:
                if j not in inside:
                    total += w
        return total

    def gain(self, x: int, members) -> float:
        inside = 0.0
        for j, w in self._adj[x]:
            if j in members:
                inside += w
        return self._deg[x] - 2.0 * inside


class RevMax:
    """f(S) = sum over buyers i outside S of (sum_{j in S} w_ij) ** alpha_i."""

    name = "revmax"

    def __init__(self, g: Graph, params: RevMaxParams):
        params.validate(g)
        self.graph = g
        self.n = g.n
        self.alpha = tuple(params.alpha)
        # incoming[i]: (j, w_ij) -- how much j pushes buyer i
        # outgoing[j]: (i, w_ij) -- buyers that j pushes
        self._incoming = tuple(tuple((j, params.w[(i, j)]) for j, _ in g.adjacency[i]) for i in range(g.n))
        self._outgoing = tuple(tuple((i, params.w[(i, j)]) for i, _ in g.adjacency[j]) for j in range(g.n))

    def value(self, members) -> float:
        inside = members if isinstance(members, (set, frozenset)) else set(members)
        sums: dict[int, float] = {}
        for j in sorted(inside):
            for i, w in self._outgoing[j]:
                if i not in inside:
                    sums[i] = sums.get(i, 0.0) + w
        alpha = self.alpha
        return math.fsum(s ** alpha[i] for i, s in sorted(sums.items()))

    def _influence(self, i: int, members) -> float:
        s = 0.0
        for j, w in self._incoming[i]:
            if j in members:
                s += w
        return s

    def gain(self, x: int, members) -> float:
        alpha = self.alpha
        delta = -(self._influence(x, members) ** alpha[x])
        for i, w in self._outgoing[x]:
            if i in members:
                continue
            s = self._influence(i, members)
            delta += (s + w) ** alpha[i] - s ** alpha[i]
        return delta


def maxcut_oracle(g: Graph) -> ValueOracle:
    return ValueOracle(MaxCut(g))


def revmax_oracle(g: Graph, params: RevMaxParams) -> ValueOracle:
    return ValueOracle(RevMax(g, params))


def _open_uniform(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniform draws on the open interval (0, 1)."""
    out = rng.random(size)
    bad = out == 0.0
    while bad.any():
        out[bad] = rng.random(int(bad.sum()))
        bad = out == 0.0
    return out


def gen_revmax_params(g: Graph, seed: int) -> RevMaxParams:
    rng = np.random.default_rng(seed)
    keys = [(i, j) for i in range(g.n) for j, _ in g.adjacency[i]]
    draws = _open_uniform(rng, len(keys))
    alpha = _open_uniform(rng, g.n)
    return RevMaxParams(w=dict(zip(keys, draws.tolist())), alpha=tuple(alpha.tolist()))


def gen_er(n: int, p: float, seed: int) -> Graph:
    """G(n, p) with unit weights, via geometric skipping (Batagelj & Brandes)."""
    if n < 1:
        raise GraphError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability {p} outside [0, 1]")
    edges: list[tuple[int, int]] = []
    if p == 1.0:
        edges = [(v, w) for v in range(n) for w in range(v)]
    elif p > 0.0:
        rng = np.random.default_rng(seed)
        log_q = math.log1p(-p)
        v, w = 1, -1
        while v < n:
            r = rng.random()
            w += 1 + int(math.floor(math.log1p(-r) / log_q))
            while w >= v and v < n:
                w -= v
                v += 1
            if v < n:
                edges.append((v, w))
    return Graph.from_edges(n, edges)


def load_edge_list(path: str | Path) -> Graph:
    """Read a SNAP-style edge list: ``u v`` or ``u v w`` per line, ``#`` comments.

    Vertex labels are remapped to ``0..n-1`` in order of first appearance;
    reversed and repeated edges keep the first occurrence, self-loops are
    dropped (their vertex still counts).
    """
    path = Path(path)
    index: dict[int, int] = {}
    edges: list[tuple[int, int, float]] = []
    with path.open() as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise EdgeListError(f"{path}:{lineno}: expected 'u v' or 'u v w', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError:
                raise EdgeListError(f"{path}:{lineno}: cannot parse {line!r}") from None
            if not (w > 0 and math.isfinite(w)):
                raise EdgeListError(f"{path}:{lineno}: weight must be positive, got {parts[2]}")
            for label in (u, v):
                if label not in index:
                    index[label] = len(index)
            if u != v:
                edges.append((index[u], index[v], w))
    if not index:
        raise EdgeListError(f"{path}: no edges")
    labels = sorted(index, key=index.__getitem__)
    return Graph.from_edges(len(index), edges, labels=labels)


def write_edge_list(g: Graph, path: str | Path, header: str | None = None) -> None:
    unit = g.is_unit_weight()
    names = g.labels if g.labels is not None else range(g.n)
    with Path(path).open("w") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for u, v, w in g.edges():
            if unit:
                fh.write(f"{names[u]} {names[v]}\n")
            else:
                fh.write(f"{names[u]} {names[v]} {w!r}\n")
