"""Smallest enclosing disk by randomized incremental construction.

The outer loop keeps the smallest disk of the points seen so far.  A point
outside it must lie on the boundary of the new disk, found by ``update1``,
which rescans the earlier points; a point outside during that scan fixes a
second boundary point and ``update2`` finds the third.

Membership is decided exactly against the circle through the support points,
so the result never depends on rounding in the stored center and radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .drivers import ForkJoin, RoundTrace, run_type2
from .geomkit import (Disk, GeometryError, circumdisk, diameter_disk, diametral_sign, incircle,
                      orient2d)
from .order import Permutation


def disk_from_2(p, q) -> Disk:
    return diameter_disk(p, q)


def disk_from_3(p, q, r) -> Disk:
    return circumdisk(p, q, r)


@dataclass
class SebState:
    disk: Disk
    support: tuple[int, ...]
    metrics: dict = field(default_factory=dict)
    trace: RoundTrace | None = None

    def key(self):
        return (self.disk, self.support)


class _Welzl:
    def __init__(self, points, perm: Permutation):
        n = len(points)
        if n < 2:
            raise ValueError("enclosing disk needs at least two points")
        if perm.n != n:
            raise ValueError("permutation size does not match point count")
        self.n = n
        self.ids = perm.order
        self.pts = [(float(points[e][0]), float(points[e][1])) for e in perm.order]
        self.support: tuple[int, ...] = ()
        self.disk: Disk | None = None
        self.update1_calls = 0
        self.update2_calls = 0

    def outside(self, k: int) -> bool:
        p = self.pts[k]
        s = [self.pts[i] for i in self.support]
        if len(s) == 2:
            return diametral_sign(s[0], s[1], p) < 0
        return incircle(s[0], s[1], s[2], p) < 0

    def set2(self, i: int, j: int) -> None:
        self.support = (i, j)
        self.disk = disk_from_2(self.pts[i], self.pts[j])

    def set3(self, i: int, j: int, k: int) -> None:
        self.support = (i, j, k)
        self.disk = disk_from_3(self.pts[i], self.pts[j], self.pts[k])

    def state(self, trace=None) -> SebState:
        support = tuple(sorted(self.ids[i] for i in self.support))
        return SebState(self.disk, support,
                        metrics={"update1_calls": self.update1_calls,
                                 "update2_calls": self.update2_calls},
                        trace=trace)


def seb_seq(points, perm: Permutation, on_step=None) -> SebState:
    """``on_step(i, disk)`` is called after each outer step from step 1 on."""
    w = _Welzl(points, perm)

    def update2(i, j):
        w.update2_calls += 1
        w.set2(i, j)
        for k in range(j):
            if w.outside(k):
                w.set3(i, j, k)

    def update1(i):
        w.update1_calls += 1
        w.set2(0, i)
        for j in range(1, i):
            if w.outside(j):
                update2(i, j)

    w.set2(0, 1)
    if on_step:
        on_step(1, w.disk)
    for i in range(2, w.n):
        if w.outside(i):
            update1(i)
        if on_step:
            on_step(i, w.disk)
    res = w.state()
    res.metrics["rounds"] = w.n
    return res


def seb_par(points, perm: Permutation, pool: ForkJoin | None = None) -> SebState:
    """Both rescans are prefix-doubled: each finds its earliest outside point
    by a min-reduction over the current block, then handles it alone."""
    pool = pool or ForkJoin()
    w = _Welzl(points, perm)
    inner = {"rounds": 0, "sub_rounds": 0}

    def nested(n, special):
        def step(k):
            if w.outside(k):
                special(k)
        t = run_type2(n, w.outside, lambda k: None, step, pool=pool)
        inner["rounds"] += t.rounds
        inner["sub_rounds"] += t.sub_rounds

    def update2(i, j):
        w.update2_calls += 1
        w.set2(i, j)
        nested(j, lambda k: w.set3(i, j, k))

    def update1(i):
        w.update1_calls += 1
        w.set2(0, i)
        # step 0 of the scan is the disk's own support point
        nested(i, lambda j: update2(i, j) if j > 0 else None)

    def outer(i):
        if i == 0:
            return
        if i == 1:
            w.set2(0, 1)
        elif w.outside(i):
            update1(i)

    def check(i):
        return i == 1 or w.outside(i)

    trace = run_type2(w.n, check, lambda i: None, outer, pool=pool)
    res = w.state(trace)
    res.metrics.update(rounds=trace.rounds, sub_rounds=trace.sub_rounds,
                       inner_rounds=inner["rounds"], inner_sub_rounds=inner["sub_rounds"])
    return res


def _hull(pts):
    """Andrew's monotone chain with exact turns; returns hull vertex indices."""
    idx = sorted(range(len(pts)), key=lambda i: pts[i])
    if len(idx) < 3:
        return idx

    def chain(seq):
        out = []
        for i in seq:
            while len(out) >= 2 and orient2d(pts[out[-2]], pts[out[-1]], pts[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower, upper = chain(idx), chain(reversed(idx))
    return sorted(set(lower[:-1] + upper[:-1]))


def brute_force(points, slack: float = 1e-9) -> Disk:
    """Smallest disk over hull-vertex pairs and triples that covers all points.

    Enclosing disks are supported by hull vertices, so restricting candidates
    to them keeps the search small without changing the answer.  Coverage
    allows ``slack`` relative to the radius.
    """
    pts = [(float(p[0]), float(p[1])) for p in points]
    if len(pts) < 2:
        raise ValueError("enclosing disk needs at least two points")
    xy = np.asarray(pts)
    hull = _hull(pts)
    if len(hull) < 2:
        hull = list(range(len(pts)))
    cands = []
    for a in range(len(hull)):
        for b in range(a + 1, len(hull)):
            cands.append(diameter_disk(pts[hull[a]], pts[hull[b]]))
            for c in range(b + 1, len(hull)):
                try:
                    cands.append(circumdisk(pts[hull[a]], pts[hull[b]], pts[hull[c]]))
                except GeometryError:
                    pass
    cands.sort(key=lambda d: d.radius)
    for d in cands:
        dist = np.hypot(xy[:, 0] - d.cx, xy[:, 1] - d.cy)
        if dist.max() <= d.radius * (1.0 + slack) + slack:
            return d
    raise AssertionError("no candidate disk covers the points")


def covers(disk: Disk, points, slack: float = 1e-9) -> bool:
    return all(math.hypot(p[0] - disk.cx, p[1] - disk.cy) <= disk.radius + slack
               for p in points)
