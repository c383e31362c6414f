"""Directed graphs, edge-list I/O, a seeded generator and reference oracles."""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass

from .order import Stream, substream_seed

INF = math.inf


@dataclass(frozen=True)
class Graph:
    n: int
    out_adj: tuple[tuple[tuple[int, float], ...], ...]
    in_adj: tuple[tuple[tuple[int, float], ...], ...]
    weighted: bool = False

    @classmethod
    def from_edges(cls, n: int, edges, weighted: bool = False) -> "Graph":
        out = [[] for _ in range(n)]
        inn = [[] for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            w = float(e[2]) if weighted else 1.0
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if not w >= 0.0 or math.isinf(w):
                raise ValueError(f"edge ({u}, {v}) has invalid weight {w}")
            out[u].append((v, w))
            inn[v].append((u, w))
        return cls(n, tuple(map(tuple, out)), tuple(map(tuple, inn)), weighted)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.out_adj)

    def edges(self) -> list[tuple]:
        if self.weighted:
            return [(u, v, w) for u in range(self.n) for v, w in self.out_adj[u]]
        return [(u, v) for u in range(self.n) for v, _ in self.out_adj[u]]

    def is_transpose_consistent(self) -> bool:
        fwd = sorted((u, v, w) for u in range(self.n) for v, w in self.out_adj[u])
        bwd = sorted((u, v, w) for v in range(self.n) for u, w in self.in_adj[v])
        return fwd == bwd


def parse_edge_list(text: str) -> Graph:
    """Header ``n m [weighted]`` then ``m`` lines ``u v [w]``; ``#`` starts a comment."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise ValueError("empty edge list")
    lineno, head = rows[0]
    if len(head) not in (2, 3) or (len(head) == 3 and head[2] != "weighted"):
        raise ValueError(f"line {lineno}: expected header 'n m [weighted]'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ValueError(f"line {lineno}: bad header counts") from None
    if n < 0 or m < 0:
        raise ValueError(f"line {lineno}: negative count")
    weighted = len(head) == 3
    if len(rows) - 1 != m:
        raise ValueError(f"line {lineno}: header promises {m} edges, found {len(rows) - 1}")
    edges = []
    for lineno, parts in rows[1:]:
        if len(parts) != (3 if weighted else 2):
            raise ValueError(f"line {lineno}: expected {'u v w' if weighted else 'u v'}")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if weighted else 1.0
        except ValueError:
            raise ValueError(f"line {lineno}: bad number") from None
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"line {lineno}: vertex out of range [0, {n})")
        if not (w >= 0.0 and math.isfinite(w)):
            raise ValueError(f"line {lineno}: weight must be finite and non-negative")
        edges.append((u, v, w))
    return Graph.from_edges(n, edges, weighted)


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}" + (" weighted" if g.weighted else "")]
    for e in g.edges():
        lines.append(" ".join(repr(x) for x in e))
    return "\n".join(lines) + "\n"


def gen_random_graph(n: int, m: int, seed: int, weighted: bool = False) -> Graph:
    """``m`` edges drawn uniformly with replacement; weights uniform in (0, 1]."""
    if m < 0 or n < 0:
        raise ValueError("n and m must be non-negative")
    if n == 0 and m > 0:
        raise ValueError("cannot place edges on an empty vertex set")
    rng = Stream(substream_seed(seed, "graph"))
    edges = []
    for _ in range(m):
        u = rng.bounded(n)
        v = rng.bounded(n)
        w = 1.0 - rng.uniform() if weighted else 1.0
        edges.append((u, v, w))
    return Graph.from_edges(n, edges, weighted)


def oracle_sssp(g: Graph, source: int) -> list[float]:
    """Dijkstra (weighted) or BFS distances; unreachable vertices get ``inf``."""
    dist = [INF] * g.n
    dist[source] = 0.0
    if not g.weighted:
        q = deque([source])
        while q:
            u = q.popleft()
            for v, _ in g.out_adj[u]:
                if dist[v] == INF:
                    dist[v] = dist[u] + 1.0
                    q.append(v)
        return dist
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in g.out_adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def oracle_scc(g: Graph) -> list[int]:
    """Tarjan's algorithm, iterative; components numbered in completion order."""
    n = g.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    label = [-1] * n
    stack: list[int] = []
    counter = 0
    comps = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            u, i = work[-1]
            adj = g.out_adj[u]
            if i < len(adj):
                work[-1] = (u, i + 1)
                v = adj[i][0]
                if index[v] == -1:
                    index[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on_stack[v] = True
                    work.append((v, 0))
                elif on_stack[v]:
                    low[u] = min(low[u], index[v])
                continue
            work.pop()
            if work:
                p = work[-1][0]
                low[p] = min(low[p], low[u])
            if low[u] == index[u]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    label[w] = comps
                    if w == u:
                        break
                comps += 1
    return label


def kosaraju_scc(g: Graph) -> list[int]:
    """Second oracle: finish order on G, then sweeps on the transpose."""
    n = g.n
    seen = [False] * n
    finish = []
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        work = [(root, 0)]
        while work:
            u, i = work[-1]
            adj = g.out_adj[u]
            if i < len(adj):
                work[-1] = (u, i + 1)
                v = adj[i][0]
                if not seen[v]:
                    seen[v] = True
                    work.append((v, 0))
            else:
                work.pop()
                finish.append(u)
    label = [-1] * n
    comps = 0
    for root in reversed(finish):
        if label[root] != -1:
            continue
        label[root] = comps
        q = [root]
        while q:
            u = q.pop()
            for v, _ in g.in_adj[u]:
                if label[v] == -1:
                    label[v] = comps
                    q.append(v)
        comps += 1
    return label


def canonical_labels(labels) -> list[int]:
    """Renumber by first occurrence so equal partitions compare equal."""
    remap: dict = {}
    return [remap.setdefault(x, len(remap)) for x in labels]
