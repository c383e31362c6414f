"""Randomized incremental closest pair on a rebuildable grid.

The grid has cells of side ``r``, the current closest distance, so any point
closer than ``r`` to a new point sits in the new point's cell or one of its
eight neighbours.  An insertion that finds a strictly closer pair shrinks
``r`` and rebuilds the grid (a special step).  Pairs are compared as
``(squared distance, min id, max id)`` so equal distances resolve to the
lexicographically smallest id pair.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .drivers import ForkJoin, Halt, RoundTrace, run_type2
from .order import Permutation

# cells are widened by this relative margin so floor() rounding never pushes
# a point at distance <= r two cells away
CELL_MARGIN = 1e-9
MAX_PER_CELL = 9


@dataclass
class PairGrid:
    cell: float
    table: dict = field(default_factory=dict)
    count: int = 0

    def key(self, x: float, y: float) -> tuple[int, int]:
        return (math.floor(x / self.cell), math.floor(y / self.cell))

    def insert(self, k: int, x: float, y: float) -> None:
        bucket = self.table.setdefault(self.key(x, y), [])
        bucket.append(k)
        if len(bucket) > MAX_PER_CELL:
            raise AssertionError(f"grid cell {self.key(x, y)} holds {len(bucket)} points")
        self.count += 1

    def neighbours(self, x: float, y: float):
        ix, iy = self.key(x, y)
        table = self.table
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                bucket = table.get((ix + dx, iy + dy))
                if bucket:
                    yield from bucket


def grid_rebuild(xs, ys, r: float, ranks=None) -> PairGrid:
    """Hash points ``ranks`` (default all) into cells of side ``r``."""
    if not r > 0.0:
        raise ValueError("grid cell size must be positive")
    grid = PairGrid(r * (1.0 + CELL_MARGIN))
    for k in range(len(xs)) if ranks is None else ranks:
        grid.insert(k, xs[k], ys[k])
    return grid


@dataclass
class PairResult:
    pair: tuple[int, int]
    distance: float
    metrics: dict = field(default_factory=dict)
    trace: RoundTrace | None = None

    def key(self):
        return (self.pair, self.distance)


class _State:
    def __init__(self, points, perm: Permutation):
        n = len(points)
        if n < 2:
            raise ValueError("closest pair needs at least two points")
        if perm.n != n:
            raise ValueError("permutation size does not match point count")
        self.n = n
        self.ids = perm.order
        self.x = [float(points[e][0]) for e in perm.order]
        self.y = [float(points[e][1]) for e in perm.order]
        self.best = None
        self.grid: PairGrid | None = None
        self.rebuilds = 0

    def pair(self, j: int, k: int):
        dx = self.x[j] - self.x[k]
        dy = self.y[j] - self.y[k]
        a, b = self.ids[j], self.ids[k]
        return (dx * dx + dy * dy, min(a, b), max(a, b))

    def near(self, k: int, candidates):
        best = None
        for j in candidates:
            c = self.pair(j, k)
            if best is None or c < best:
                best = c
        return best

    def init(self) -> None:
        self.best = self.pair(0, 1)
        if self.best[0] == 0.0:
            raise Halt
        self.grid = grid_rebuild(self.x, self.y, math.sqrt(self.best[0]), range(2))

    def shrink(self, k: int, c) -> None:
        self.best = c
        self.rebuilds += 1
        if c[0] == 0.0:
            raise Halt
        self.grid = grid_rebuild(self.x, self.y, math.sqrt(c[0]), range(k + 1))

    def result(self, trace=None) -> PairResult:
        d2, a, b = self.best
        return PairResult((a, b), math.sqrt(d2),
                          metrics={"rebuilds": self.rebuilds, "special_steps": self.rebuilds},
                          trace=trace)


def closest_pair_seq(points, perm: Permutation, on_step=None) -> PairResult:
    """``on_step(k, best)`` is called after each insertion from step 1 on."""
    st = _State(points, perm)
    try:
        st.init()
        if on_step:
            on_step(1, st.best)
        for k in range(2, st.n):
            c = st.near(k, st.grid.neighbours(st.x[k], st.y[k]))
            if c is not None and c[0] < st.best[0]:
                st.shrink(k, c)
            else:
                if c is not None and c < st.best:
                    st.best = c
                st.grid.insert(k, st.x[k], st.y[k])
            if on_step:
                on_step(k, st.best)
    except Halt:
        pass
    res = st.result()
    res.metrics["rounds"] = st.n
    return res


def closest_pair_par(points, perm: Permutation, pool: ForkJoin | None = None) -> PairResult:
    """Prefix-doubled insertion.

    Each sub-round stages the unfinished points of the block in cells of the
    current size.  A point's candidate comes from the frozen grid plus staged
    points of smaller rank, which is exactly what sequential insertion would
    see.  The earliest point with a strictly smaller distance is the special
    step; the points before it are inserted concurrently.
    """
    st = _State(points, perm)
    cand: dict[int, tuple] = {}
    staged: dict = {}
    lock = threading.Lock()

    def prepare(lo, hi):
        staged.clear()
        if st.grid is None:
            return
        for k in range(lo, hi):
            staged.setdefault(st.grid.key(st.x[k], st.y[k]), []).append(k)

    def check(k):
        if st.best is None:
            return True
        ix, iy = st.grid.key(st.x[k], st.y[k])
        block = []
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for j in staged.get((ix + dx, iy + dy), ()):
                    if j < k:
                        block.append(j)
        near_grid = st.near(k, st.grid.neighbours(st.x[k], st.y[k]))
        near_block = st.near(k, block)
        c = min((c for c in (near_grid, near_block) if c is not None), default=None)
        cand[k] = c
        return c is not None and c[0] < st.best[0]

    def regular(k):
        c = cand[k]
        with lock:
            if c is not None and c < st.best:
                st.best = c
            st.grid.insert(k, st.x[k], st.y[k])

    def special(k):
        if k == 0:
            return
        if k == 1:
            st.init()
            return
        st.shrink(k, st.near(k, st.grid.neighbours(st.x[k], st.y[k])))

    trace = run_type2(st.n, check, regular, special, prepare=prepare, pool=pool)
    res = st.result(trace)
    res.metrics.update(rounds=trace.rounds, sub_rounds=trace.sub_rounds)
    return res


def brute_force(points):
    """Minimum of ``(squared distance, min id, max id)`` over all pairs.

    One vectorized row per point; squared distances use the same operation
    order as the incremental code, so ties compare identically.
    """
    xy = np.asarray([(p[0], p[1]) for p in points], dtype=np.float64).reshape(-1, 2)
    best = None
    for i in range(len(xy) - 1):
        dx = xy[i, 0] - xy[i + 1:, 0]
        dy = xy[i, 1] - xy[i + 1:, 1]
        d2 = dx * dx + dy * dy
        j = int(np.argmin(d2))
        c = (float(d2[j]), i, i + 1 + j)
        if best is None or c < best:
            best = c
    return best
