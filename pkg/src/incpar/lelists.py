"""LE-lists by iterated pruned shortest-path searches.

Vertices are inserted in random order.  The search from vertex ``v`` only
settles vertices ``u`` whose distance from ``v`` beats ``delta[u]``, the best
distance from any earlier vertex; each such ``u`` gets the entry ``(v, d)``.
A vertex that fails the test is not expanded, which is safe: anything
reached through it is at least as close to the earlier source.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .drivers import ForkJoin, RoundTrace, run_type3
from .graphcore import INF, Graph, oracle_sssp
from .order import Permutation


class LeEntry(NamedTuple):
    source: int
    dist: float


@dataclass
class LeResult:
    lists: list[list[LeEntry]]
    metrics: dict = field(default_factory=dict)
    trace: RoundTrace | None = None

    def max_length(self) -> int:
        return max((len(x) for x in self.lists), default=0)

    def dump(self) -> str:
        return "".join(
            f"{u} " + " ".join(f"({e.source},{e.dist!r})" for e in lst) + "\n"
            for u, lst in enumerate(self.lists))


def pruned_sssp(g: Graph, source: int, delta) -> list[tuple[int, float]]:
    """``(u, d(source, u))`` for every ``u`` with that distance below ``delta[u]``.

    Returned in settle order.  BFS for unweighted graphs, Dijkstra otherwise.
    """
    out = []
    if not 0.0 < delta[source]:
        return out
    if not g.weighted:
        seen = {source: 0.0}
        q = deque([source])
        while q:
            u = q.popleft()
            d = seen[u]
            out.append((u, d))
            nd = d + 1.0
            for v, _ in g.out_adj[u]:
                if v not in seen and nd < delta[v]:
                    seen[v] = nd
                    q.append(v)
        return out
    dist = {source: 0.0}
    done = set()
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        out.append((u, d))
        for v, w in g.out_adj[u]:
            nd = d + w
            if nd < delta[v] and nd < dist.get(v, INF):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return out


def _check(g: Graph, perm: Permutation) -> None:
    if perm.n != g.n:
        raise ValueError("permutation size does not match vertex count")


def le_lists_seq(g: Graph, perm: Permutation) -> LeResult:
    _check(g, perm)
    delta = [INF] * g.n
    lists: list[list[LeEntry]] = [[] for _ in range(g.n)]
    visits = 0
    for v in perm.order:
        hits = pruned_sssp(g, v, delta)
        visits += len(hits)
        for u, d in hits:
            lists[u].append(LeEntry(v, d))
            delta[u] = d
    return LeResult(lists, metrics={"visits": visits, "rounds": g.n})


def combine_group(hits, start: float):
    """Replay one target's hits, given as ``(rank, dist)`` in rank order.

    Keeps the strict prefix minima below ``start``; returns the kept hits and
    the final delta.
    """
    kept = []
    cur = start
    for rank, d in hits:
        if d < cur:
            kept.append((rank, d))
            cur = d
    return kept, cur


def le_lists_par(g: Graph, perm: Permutation, pool: ForkJoin | None = None) -> LeResult:
    """Doubling rounds: every step of a round searches against the delta
    snapshot from the round start, then the hits are sorted by
    ``(target, rank)`` and replayed per target."""
    _check(g, perm)
    delta = [INF] * g.n
    lists: list[list[LeEntry]] = [[] for _ in range(g.n)]
    visits = 0
    order = perm.order

    def step(k):
        return pruned_sssp(g, order[k], delta)

    def combine(lo, results):
        nonlocal visits
        triples = []
        for off, hits in enumerate(results):
            visits += len(hits)
            triples.extend((u, lo + off, d) for u, d in hits)
        triples.sort(key=lambda t: (t[0], t[1]))
        i = 0
        while i < len(triples):
            u = triples[i][0]
            j = i
            while j < len(triples) and triples[j][0] == u:
                j += 1
            kept, delta[u] = combine_group([(r, d) for _, r, d in triples[i:j]], delta[u])
            lists[u].extend(LeEntry(order[r], d) for r, d in kept)
            i = j

    trace = run_type3(g.n, step, combine, pool=pool)
    return LeResult(lists, metrics={"visits": visits, "rounds": trace.rounds}, trace=trace)


def le_lists_oracle(g: Graph, perm: Permutation) -> list[list[LeEntry]]:
    """Straight from the definition, using one full search per vertex."""
    _check(g, perm)
    lists: list[list[LeEntry]] = [[] for _ in range(g.n)]
    best = [INF] * g.n
    for v in perm.order:
        dist = oracle_sssp(g, v)
        for u in range(g.n):
            if dist[u] < best[u]:
                best[u] = dist[u]
                lists[u].append(LeEntry(v, dist[u]))
    return lists
