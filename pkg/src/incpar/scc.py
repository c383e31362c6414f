"""Strongly connected components by iterated pivot searches.

Vertices are visited in random order.  A live pivot runs forward and
backward reachability restricted to its part of the vertex partition; the
intersection is its component, and the remaining reached sets split the
part.  Parts only ever hold whole components, so restricted searches see
the same components as the full graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .drivers import ForkJoin, RoundTrace, run_type3
from .graphcore import Graph
from .order import Permutation

DEAD = -1
UNASSIGNED = -1
FWD, BWD = 0, 1


@dataclass
class PartitionState:
    part: list[int]
    scc_label: list[int]
    next_part: int = 1
    components: int = 0

    @classmethod
    def fresh(cls, n: int) -> "PartitionState":
        return cls([0] * n, [UNASSIGNED] * n)

    def alive(self, v: int) -> bool:
        return self.part[v] != DEAD


@dataclass
class ReachResult:
    pivot: int
    forward: set[int]
    backward: set[int]


@dataclass
class SccResult:
    labels: list[int]
    metrics: dict = field(default_factory=dict)
    trace: RoundTrace | None = None

    @property
    def count(self) -> int:
        return len(set(self.labels))

    def dump(self) -> str:
        return "".join(f"{v} {c}\n" for v, c in enumerate(self.labels))


def restricted_reach(g: Graph, part, source: int, direction: int) -> set[int]:
    """BFS from ``source`` along out-edges (FWD) or in-edges (BWD), staying in its part."""
    p = part[source]
    if p == DEAD:
        raise ValueError(f"vertex {source} is already in a component")
    adj = g.out_adj if direction == FWD else g.in_adj
    seen = {source}
    q = deque([source])
    while q:
        u = q.popleft()
        for v, _ in adj[u]:
            if v not in seen and part[v] == p:
                seen.add(v)
                q.append(v)
    return seen


def _check(g: Graph, perm: Permutation) -> None:
    if perm.n != g.n:
        raise ValueError("permutation size does not match vertex count")


def reach_both(g: Graph, part, pivot: int) -> ReachResult:
    return ReachResult(pivot, restricted_reach(g, part, pivot, FWD),
                       restricted_reach(g, part, pivot, BWD))


def scc_seq(g: Graph, perm: Permutation) -> SccResult:
    _check(g, perm)
    st = PartitionState.fresh(g.n)
    visits = 0
    for v in perm.order:
        if not st.alive(v):
            continue
        r = reach_both(g, st.part, v)
        visits += len(r.forward) + len(r.backward)
        comp = r.forward & r.backward
        for u in comp:
            st.part[u] = DEAD
            st.scc_label[u] = st.components
        st.components += 1
        fwd_id, bwd_id = st.next_part, st.next_part + 1
        st.next_part += 2
        for u in r.forward - comp:
            st.part[u] = fwd_id
        for u in r.backward - comp:
            st.part[u] = bwd_id
    return SccResult(st.scc_label, metrics={"visits": visits, "rounds": g.n,
                                            "components": st.components})


def scc_par(g: Graph, perm: Permutation, pool: ForkJoin | None = None) -> SccResult:
    """Doubling rounds over the pivot order.

    Every pivot alive at the round start searches the round-start partition.
    The combine gives each vertex the minimum-rank search whose forward and
    backward sets both contain it; components are numbered by that rank, as
    the sequential order would.  Then every live touched vertex moves to the
    part keyed by its old part and the set of (search, direction) hits, which
    cuts every edge separating reached from unreached vertices.
    """
    _check(g, perm)
    st = PartitionState.fresh(g.n)
    order = perm.order
    visits = 0

    def step(k):
        v = order[k]
        if not st.alive(v):
            return None
        return reach_both(g, st.part, v)

    def combine(lo, results):
        nonlocal visits
        owner: dict[int, int] = {}
        hits: dict[int, list] = {}
        for off, r in enumerate(results):
            if r is None:
                continue
            k = lo + off
            visits += len(r.forward) + len(r.backward)
            # ascending k, so setdefault is the minimum-rank priority write
            for u in r.forward & r.backward:
                owner.setdefault(u, k)
            for u in r.forward:
                hits.setdefault(u, []).append((k, FWD))
            for u in r.backward:
                hits.setdefault(u, []).append((k, BWD))
        founders = sorted(set(owner.values()))
        comp_id = {k: st.components + i for i, k in enumerate(founders)}
        st.components += len(founders)
        for u, k in owner.items():
            st.part[u] = DEAD
            st.scc_label[u] = comp_id[k]
        new_part: dict = {}
        for u in sorted(hits):
            if u in owner:
                continue
            key = (st.part[u], tuple(sorted(hits[u])))
            if key not in new_part:
                new_part[key] = st.next_part
                st.next_part += 1
            st.part[u] = new_part[key]

    trace = run_type3(g.n, step, combine, pool=pool)
    return SccResult(st.scc_label, metrics={"visits": visits, "rounds": trace.rounds,
                                            "components": st.components}, trace=trace)
