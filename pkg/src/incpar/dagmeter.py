"""Dependence DAG recording and depth statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class IterationDag:
    """Dependence arcs between steps (or sub-steps).

    Node ids are dense and assigned in creation order; every arc must point
    from an earlier-created node to a later one, which keeps the graph acyclic
    by construction.
    """

    node_count: int = 0
    labels: list = field(default_factory=list)
    preds: list = field(default_factory=list)

    def add_node(self, label=None) -> int:
        self.labels.append(label)
        self.preds.append(set())
        self.node_count += 1
        return self.node_count - 1

    def record_arc(self, src: int, dst: int) -> "IterationDag":
        if not (0 <= src < self.node_count and 0 <= dst < self.node_count):
            raise IndexError(f"arc ({src}, {dst}) uses an unregistered node")
        if src >= dst:
            raise ValueError(f"arc ({src}, {dst}) violates creation order")
        self.preds[dst].add(src)
        return self

    @property
    def arcs(self) -> set[tuple[int, int]]:
        return {(p, v) for v, ps in enumerate(self.preds) for p in ps}

    def arc_count(self) -> int:
        return sum(len(ps) for ps in self.preds)

    def levels(self) -> list[int]:
        """Longest-path arc count ending at each node."""
        level = [0] * self.node_count
        # creation order is a topological order
        for v, ps in enumerate(self.preds):
            if ps:
                level[v] = 1 + max(level[p] for p in ps)
        return level

    def transitive_reduction(self) -> set[tuple[int, int]]:
        """Arcs not implied by a longer path.  Quadratic; meant for small DAGs."""
        reach: list[set[int]] = []
        for v in range(self.node_count):
            r = set(self.preds[v])
            for p in self.preds[v]:
                r |= reach[p]
            reach.append(r)
        reduced = set()
        for v, ps in enumerate(self.preds):
            implied = set()
            for p in ps:
                implied |= reach[p]
            reduced.update((p, v) for p in ps if p not in implied)
        return reduced


def harmonic(n: int) -> float:
    return math.fsum(1.0 / i for i in range(1, n + 1))


@dataclass(frozen=True)
class DepthStats:
    depth: int
    n: int
    harmonic_n: float
    ratio_to_ln_n: float | None

    @classmethod
    def of(cls, depth: int, n: int) -> "DepthStats":
        ratio = depth / math.log(n) if n >= 2 else None
        return cls(depth, n, harmonic(n), ratio)


def longest_path(dag: IterationDag, n: int | None = None) -> DepthStats:
    """Depth of ``dag`` in arcs.  ``n`` is the problem size (defaults to node count)."""
    levels = dag.levels()
    depth = max(levels, default=0)
    return DepthStats.of(depth, dag.node_count if n is None else n)


@dataclass(frozen=True)
class DepthSummary:
    mean: float
    max: int
    max_ratio_to_ln_n: float | None
    runs: int


def aggregate(runs: list[DepthStats]) -> DepthSummary:
    if not runs:
        raise ValueError("aggregate needs at least one run")
    sizes = {r.n for r in runs}
    if len(sizes) != 1:
        raise ValueError(f"runs mix problem sizes {sorted(sizes)}")
    ratios = [r.ratio_to_ln_n for r in runs if r.ratio_to_ln_n is not None]
    return DepthSummary(
        mean=math.fsum(r.depth for r in runs) / len(runs),
        max=max(r.depth for r in runs),
        max_ratio_to_ln_n=max(ratios) if ratios else None,
        runs=len(runs),
    )
