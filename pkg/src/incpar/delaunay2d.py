"""Offline randomized incremental Delaunay triangulation in the plane.

Every triangle carries its conflict set: the not-yet-inserted points strictly
inside its circumcircle, stored as a sorted array of insertion ranks.
Inserting a point replaces each boundary face of its cavity with a new
triangle whose conflict set is filtered from the two triangles that shared
the face.  Points in both parents' sets are kept without a test.

Internally points are renumbered by insertion rank; ranks ``n, n+1, n+2`` are
the three far vertices of the bounding triangle.  Results are reported with
the caller's point ids.

The parallel variant (``triangulate_par``) keeps a map from faces to their
incident triangles and, each round, applies the replacement on every face
whose two triangles have different earliest conflicts.  It performs exactly
the same replacements as the sequential algorithm, in dependence order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dagmeter import IterationDag
from .drivers import ForkJoin
from .geomkit import incircle_batch
from .order import Permutation

NONE = -1
# the predicates are exact, so the far vertices can sit well beyond any
# circumcircle a hull triangle of finite float inputs can have
BOUNDING_SCALE = 2.0 ** 200
_EMPTY = np.empty(0, dtype=np.int64)


class DuplicatePointError(ValueError):
    pass


def filter_conflicts(x, y, a: int, b: int, v: int, conf_t: np.ndarray, conf_o: np.ndarray):
    """Conflict set of the new triangle ``(a, b, v)`` (counterclockwise).

    Candidates are ``conf_t ∪ conf_o`` minus ``v``.  Points present in both
    sets are encroaching by construction and skip the in-circle test.
    Returns ``(conflicts, tests)``.
    """
    if conf_t.size and conf_t[0] == v:
        conf_t = conf_t[1:]
    if conf_o.size == 0:
        cand = conf_t
    elif conf_t.size == 0:
        cand = conf_o
    else:
        s = np.concatenate((conf_t, conf_o))
        s.sort(kind="stable")
        eq = s[1:] == s[:-1]
        if eq.any():
            first = np.zeros(s.size, dtype=bool)
            first[:-1] = eq
            dup = first.copy()
            dup[1:] |= eq
            single = ~dup
            cand_idx = np.flatnonzero(single)
            if cand_idx.size == 0:
                return s[first], 0
            inside = incircle_batch(x[a], y[a], x[b], y[b], x[v], y[v],
                                    x[s[cand_idx]], y[s[cand_idx]]) > 0
            keep = first
            keep[cand_idx[inside]] = True
            return s[keep], int(cand_idx.size)
        cand = s
    if cand.size == 0:
        return _EMPTY, 0
    inside = incircle_batch(x[a], y[a], x[b], y[b], x[v], y[v], x[cand], y[cand]) > 0
    return cand[inside], int(cand.size)


def bounding_vertices(px: np.ndarray, py: np.ndarray, scale: float = BOUNDING_SCALE):
    """Three far vertices, counterclockwise, at ``scale`` bbox-diameters from the bbox center.

    The triangle's inscribed circle has radius ``scale / 2`` diameters, so it
    contains every input point for any ``scale > 1``.  A hull triangle is
    only lost if its circumcircle reaches a far vertex, which the default
    scale rules out for non-degenerate float inputs.  The scale shrinks if
    the vertices would overflow.
    """
    if px.size:
        lo_x, hi_x, lo_y, hi_y = px.min(), px.max(), py.min(), py.max()
        cx, cy = (lo_x + hi_x) / 2.0, (lo_y + hi_y) / 2.0
        diam = math.hypot(hi_x - lo_x, hi_y - lo_y)
    else:
        cx = cy = diam = 0.0
    if diam == 0.0:
        diam = max(1.0, abs(cx) + abs(cy))
    r = scale * diam
    while not math.isfinite(cx + r) or not math.isfinite(cy + r):
        scale /= 2.0 ** 20
        r = scale * diam
    angles = (math.pi / 2, math.pi / 2 + 2 * math.pi / 3, math.pi / 2 + 4 * math.pi / 3)
    return [(cx + r * math.cos(t), cy + r * math.sin(t)) for t in angles]


@dataclass
class Triangulation:
    """Triangles over rank-space vertices plus their conflict sets."""

    n: int
    x: np.ndarray
    y: np.ndarray
    order: tuple[int, ...]
    corners: list = field(default_factory=list)
    conf: list = field(default_factory=list)
    creator: list = field(default_factory=list)
    alive: list = field(default_factory=list)
    face_map: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    dag: IterationDag | None = None

    @property
    def bounding(self) -> tuple[int, int, int]:
        return (self.n, self.n + 1, self.n + 2)

    def face_key(self, u: int, v: int) -> int:
        return u * (self.n + 3) + v if u < v else v * (self.n + 3) + u

    def face_ends(self, key: int) -> tuple[int, int]:
        return divmod(key, self.n + 3)

    def min_conflict(self, t: int) -> int:
        c = self.conf[t]
        return int(c[0]) if c.size else self.n + 3

    def new_triangle(self, a, b, c, conf, creator) -> int:
        t = len(self.corners)
        self.corners.append((a, b, c))
        self.conf.append(conf)
        self.creator.append(creator)
        self.alive.append(True)
        if self.dag is not None:
            self.dag.add_node(t)
        return t

    def attach(self, t: int, u: int, v: int) -> None:
        self.face_map.setdefault(self.face_key(u, v), []).append(t)

    def final_triangles(self) -> list[int]:
        """Triangles with empty conflict sets: the triangulation of all points."""
        return [t for t, c in enumerate(self.conf) if c.size == 0]

    def interior_triangles(self) -> list[tuple[int, int, int]]:
        """Final triangles with no far vertex, as caller ids, canonical rotation, sorted."""
        out = []
        for t in self.final_triangles():
            a, b, c = self.corners[t]
            if max(a, b, c) >= self.n:
                continue
            tri = (self.order[a], self.order[b], self.order[c])
            k = tri.index(min(tri))
            out.append(tri[k:] + tri[:k])
        out.sort()
        return out

    def replace_boundary(self, t_o: int, a: int, b: int, t: int, v: int) -> int:
        """Detach ``t`` from face ``(a, b)`` and tent it to ``v``.

        ``(a, b)`` is the edge as oriented in ``t``; ``t_o`` is the triangle
        across it or ``NONE`` on the outer hull.
        """
        conf_o = self.conf[t_o] if t_o != NONE else _EMPTY
        new_conf, tests = filter_conflicts(self.x, self.y, a, b, v, self.conf[t], conf_o)
        t_new = self.new_triangle(a, b, v, new_conf, v)
        if self.dag is not None:
            self.dag.record_arc(t, t_new)
            if t_o != NONE:
                self.dag.record_arc(t_o, t_new)
        lst = self.face_map[self.face_key(a, b)]
        lst[lst.index(t)] = t_new
        self.attach(t_new, b, v)
        self.attach(t_new, v, a)
        self.metrics["incircle_count"] += tests
        self.metrics["replace_boundary_calls"] += 1
        return t_new

    def check_tiling(self) -> list[str]:
        """Combinatorial tiling check on the final triangles.

        Every edge must have two incident final triangles, except the three
        bounding edges which have one.  Returns a list of problems.
        """
        count: dict[int, int] = {}
        problems = []
        for t in self.final_triangles():
            a, b, c = self.corners[t]
            for u, v in ((a, b), (b, c), (c, a)):
                k = self.face_key(u, v)
                count[k] = count.get(k, 0) + 1
        for k, m in count.items():
            u, v = self.face_ends(k)
            hull = u >= self.n and v >= self.n
            if m != (1 if hull else 2):
                problems.append(f"edge {(u, v)} has {m} incident triangles")
        return problems


def _setup(points, perm: Permutation, meter: bool) -> Triangulation:
    n = len(points)
    if perm.n != n:
        raise ValueError(f"permutation over {perm.n} elements for {n} points")
    seen = {}
    for i, p in enumerate(points):
        key = (float(p[0]), float(p[1]))
        if key in seen:
            raise DuplicatePointError(f"points {seen[key]} and {i} coincide at {key}")
        seen[key] = i
    px = np.array([float(points[e][0]) for e in perm.order], dtype=np.float64)
    py = np.array([float(points[e][1]) for e in perm.order], dtype=np.float64)
    if not (np.all(np.isfinite(px)) and np.all(np.isfinite(py))):
        raise ValueError("non-finite coordinate")
    far = bounding_vertices(px, py)
    x = np.concatenate((px, [f[0] for f in far]))
    y = np.concatenate((py, [f[1] for f in far]))
    tri = Triangulation(n, x, y, perm.order, dag=IterationDag() if meter else None)
    tri.metrics.update(incircle_count=0, replace_boundary_calls=0)
    b0, b1, b2 = tri.bounding
    t = tri.new_triangle(b0, b1, b2, np.arange(n, dtype=np.int64), NONE)
    for u, v in ((b0, b1), (b1, b2), (b2, b0)):
        tri.attach(t, u, v)
    return tri


def triangulate_seq(points, perm: Permutation, meter: bool = False, on_step=None) -> Triangulation:
    """Insert points in ``perm`` order.

    ``meter=True`` records the sub-step dependence DAG (one node per
    triangle, arcs from the two replaced triangles).  ``on_step(tri, i)`` is
    called after each insertion; tests use it to audit conflict sets.
    """
    tri = _setup(points, perm, meter)
    bucket: dict[int, list[int]] = {}
    if tri.n:
        bucket[0] = [0]
    for i in range(tri.n):
        cavity = bucket.pop(i, [])
        in_cavity = set(cavity)
        jobs = []
        for t in cavity:
            a, b, c = tri.corners[t]
            for u, w in ((a, b), (b, c), (c, a)):
                lst = tri.face_map[tri.face_key(u, w)]
                other = NONE
                for s in lst:
                    if s != t:
                        other = s
                if other not in in_cavity:
                    jobs.append((other, u, w, t))
        for t in cavity:
            tri.alive[t] = False
            a, b, c = tri.corners[t]
            for u, w in ((a, b), (b, c), (c, a)):
                k = tri.face_key(u, w)
                lst = tri.face_map.get(k)
                if lst and len(lst) == 2 and lst[0] in in_cavity and lst[1] in in_cavity:
                    del tri.face_map[k]
        for t_o, u, w, t in jobs:
            t_new = tri.replace_boundary(t_o, u, w, t, i)
            c = tri.conf[t_new]
            if c.size:
                bucket.setdefault(int(c[0]), []).append(t_new)
        if on_step is not None:
            on_step(tri, i)
    tri.metrics["triangles_created"] = len(tri.corners)
    tri.metrics["rounds"] = tri.n
    return tri


def triangulate_par(points, perm: Permutation, pool: ForkJoin | None = None) -> Triangulation:
    """Face-driven rounds: every ready face is replaced concurrently.

    A face is ready when its two triangles have different earliest conflict
    points (a bounding edge with one triangle is ready when that triangle has
    conflicts).  Replacement plans are computed concurrently from the
    round-start state and committed in face-key order.
    """
    pool = pool or ForkJoin()
    tri = _setup(points, perm, meter=False)
    inf = tri.n + 3

    def ready(key: int) -> bool:
        lst = tri.face_map.get(key)
        if not lst:
            return False
        if len(lst) == 1:
            u, v = tri.face_ends(key)
            return u >= tri.n and v >= tri.n and tri.min_conflict(lst[0]) < inf
        return tri.min_conflict(lst[0]) != tri.min_conflict(lst[1])

    def plan(key: int):
        lst = tri.face_map[key]
        if len(lst) == 1:
            t, t_o = lst[0], NONE
        elif tri.min_conflict(lst[0]) < tri.min_conflict(lst[1]):
            t, t_o = lst
        else:
            t_o, t = lst
        u, w = tri.face_ends(key)
        a, b, c = tri.corners[t]
        for p, q in ((a, b), (b, c), (c, a)):
            if {p, q} == {u, w}:
                break
        v = int(tri.conf[t][0])
        conf_o = tri.conf[t_o] if t_o != NONE else _EMPTY
        new_conf, tests = filter_conflicts(tri.x, tri.y, p, q, v, tri.conf[t], conf_o)
        return key, t, p, q, v, new_conf, tests

    active = sorted(k for k in tri.face_map if ready(k))
    rounds = 0
    while active:
        rounds += 1
        plans = pool.map(plan, active)
        touched = set()
        for key, t, p, q, v, new_conf, tests in plans:
            t_new = tri.new_triangle(p, q, v, new_conf, v)
            lst = tri.face_map[key]
            lst[lst.index(t)] = t_new
            tri.attach(t_new, q, v)
            tri.attach(t_new, v, p)
            tri.metrics["incircle_count"] += tests
            tri.metrics["replace_boundary_calls"] += 1
            touched.add(key)
            touched.add(tri.face_key(q, v))
            touched.add(tri.face_key(v, p))
        for key in touched:
            if len(tri.face_map[key]) > 2:
                raise AssertionError(f"face {tri.face_ends(key)} has more than two triangles")
        active = sorted(k for k in touched if ready(k))
    for t in range(len(tri.corners)):
        tri.alive[t] = tri.conf[t].size == 0
    tri.metrics["triangles_created"] = len(tri.corners)
    tri.metrics["rounds"] = rounds
    return tri


def validate_delaunay(tri: Triangulation, points=None):
    """Empty-circumcircle check of every interior final triangle against every point.

    Returns ``(ok, violations)`` where each violation is
    ``(triangle_corner_ids, point_id)`` in caller ids.
    """
    x, y, n = tri.x[: tri.n], tri.y[: tri.n], tri.n
    if points is not None:
        pts = np.asarray([(p[0], p[1]) for p in points], dtype=np.float64).reshape(-1, 2)
        x = pts[tri.order, 0] if n else x
        y = pts[tri.order, 1] if n else y
    violations = []
    for t in tri.final_triangles():
        a, b, c = tri.corners[t]
        if max(a, b, c) >= n:
            continue
        signs = incircle_batch(x[a], y[a], x[b], y[b], x[c], y[c], x, y)
        signs[[a, b, c]] = 0
        for r in np.flatnonzero(signs > 0):
            violations.append(((tri.order[a], tri.order[b], tri.order[c]), tri.order[r]))
    return not violations, violations


def validate_triangles(points, triangles) -> tuple[bool, list]:
    """Empty-circumcircle check for an explicit triangle list (caller ids)."""
    pts = np.asarray([(p[0], p[1]) for p in points], dtype=np.float64).reshape(-1, 2)
    from .geomkit import orient2d
    violations = []
    for tri in triangles:
        a, b, c = tri
        pa, pb, pc = pts[a], pts[b], pts[c]
        o = orient2d(pa, pb, pc)
        if o == 0:
            violations.append((tuple(tri), None))
            continue
        signs = o * incircle_batch(pa[0], pa[1], pb[0], pb[1], pc[0], pc[1], pts[:, 0], pts[:, 1])
        signs[[a, b, c]] = 0
        violations.extend((tuple(tri), int(r)) for r in np.flatnonzero(signs > 0))
    return not violations, violations
