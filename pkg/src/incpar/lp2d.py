"""Seidel's randomized incremental 2D linear programming.

Maximize ``objective · (x, y)`` subject to half-planes ``a x + b y <= c``.
Two artificial constraints ``m · (x, y) <= BOUND`` with ``m`` at ±45° from the
objective direction are installed before the first input constraint, so
every intermediate problem is bounded.  An input constraint that cuts off
the running optimum triggers a 1D LP on its boundary line over every earlier
constraint; those are the special steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .drivers import ForkJoin, Halt, RoundTrace, run_type2
from .order import Permutation, Stream, substream_seed

BOUND = 1e9
ARTIFICIAL = (-1, -2)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class Halfplane(NamedTuple):
    a: float
    b: float
    c: float


@dataclass
class LpResult:
    status: str
    point: tuple[float, float] | None
    tight: tuple[int, ...]
    metrics: dict = field(default_factory=dict)
    trace: RoundTrace | None = None

    def key(self):
        return (self.status, self.point, self.tight)


def check_constraints(constraints) -> list[Halfplane]:
    out = []
    for i, h in enumerate(constraints):
        a, b, c = (float(v) for v in h)
        if not all(math.isfinite(v) for v in (a, b, c)):
            raise ValueError(f"constraint {i}: non-finite coefficient")
        if a == 0.0 and b == 0.0:
            raise ValueError(f"constraint {i}: degenerate normal (0, 0)")
        out.append(Halfplane(a, b, c))
    return out


def bounding_constraints(objective) -> list[Halfplane]:
    ox, oy = (float(v) for v in objective)
    norm = math.hypot(ox, oy)
    if norm == 0.0:
        raise ValueError("objective must be non-zero")
    ux, uy = ox / norm, oy / norm
    s = math.sqrt(0.5)
    return [Halfplane(s * (ux - uy), s * (ux + uy), BOUND),
            Halfplane(s * (ux + uy), s * (uy - ux), BOUND)]


def _vertex(h1: Halfplane, h2: Halfplane):
    det = h1.a * h2.b - h1.b * h2.a
    if det == 0.0:
        return None
    return ((h1.c * h2.b - h1.b * h2.c) / det, (h1.a * h2.c - h1.c * h2.a) / det)


def lp_1d(line: Halfplane, prior: list[Halfplane], prior_ids: list[int], objective):
    """Optimize over the boundary of ``line`` subject to ``prior`` constraints.

    The line is parameterized as ``p + t d`` with ``p`` the foot of the
    normal and ``d = (-b, a)``.  Each prior constraint bounds ``t`` from
    above or below; ties on a bound go to the smaller constraint id.
    Returns ``((x, y), tight_id)`` or ``None`` when the interval is empty.
    """
    a, b, c = line
    nn = a * a + b * b
    px, py = a * c / nn, b * c / nn
    dx, dy = -b, a
    ox, oy = objective
    if not prior:
        return None
    A = np.array([h.a for h in prior])
    B = np.array([h.b for h in prior])
    C = np.array([h.c for h in prior])
    ids = np.asarray(prior_ids)
    denom = A * dx + B * dy
    slack = C - (A * px + B * py)
    par = denom == 0.0
    if np.any(par & (slack < 0.0)):
        return None
    with np.errstate(divide="ignore", invalid="ignore"):
        t = slack / denom
    up = denom > 0.0
    lo = denom < 0.0
    t_hi = t[up].min() if up.any() else math.inf
    t_lo = t[lo].max() if lo.any() else -math.inf
    if t_lo > t_hi:
        return None
    slope = ox * dx + oy * dy
    if slope >= 0.0 and up.any():
        tt, tight = t_hi, int(ids[up][t[up] == t_hi].min())
    elif lo.any():
        tt, tight = t_lo, int(ids[lo][t[lo] == t_lo].min())
    else:
        raise ValueError("1D problem unbounded despite bounding constraints")
    return (float(px + tt * dx), float(py + tt * dy)), tight


class _Seidel:
    """Shared state for both execution modes."""

    def __init__(self, constraints, objective, perm: Permutation):
        self.cons = check_constraints(constraints)
        if perm.n != len(self.cons):
            raise ValueError("permutation size does not match constraint count")
        self.objective = tuple(float(v) for v in objective)
        self.bounds = bounding_constraints(self.objective)
        self.order = perm.order
        self.point = _vertex(*self.bounds)
        self.tight: tuple[int, ...] = ARTIFICIAL
        self.status = OPTIMAL
        self.special = 0
        # step-ordered arrays for the 1D solves
        self.seq_cons = self.bounds + [self.cons[e] for e in self.order]
        self.seq_ids = list(ARTIFICIAL) + list(self.order)

    def violates(self, k: int) -> bool:
        h = self.cons[self.order[k]]
        x, y = self.point
        return h.a * x + h.b * y > h.c

    def solve(self, k: int) -> None:
        """Special step ``k``: constraint ``order[k]`` cuts off the optimum."""
        self.special += 1
        cid = self.order[k]
        res = lp_1d(self.cons[cid], self.seq_cons[: k + 2], self.seq_ids[: k + 2], self.objective)
        if res is None:
            self.status, self.point, self.tight = INFEASIBLE, None, ()
            raise Halt
        self.point, other = res
        self.tight = tuple(sorted((cid, other)))

    def result(self, trace=None) -> LpResult:
        status = self.status
        if status == OPTIMAL and any(t < 0 for t in self.tight):
            status = UNBOUNDED
        return LpResult(status, self.point, self.tight,
                        metrics={"special_steps": self.special}, trace=trace)


def lp_seq(constraints, objective, perm: Permutation) -> LpResult:
    st = _Seidel(constraints, objective, perm)
    try:
        for k in range(perm.n):
            if st.violates(k):
                st.solve(k)
    except Halt:
        pass
    res = st.result()
    res.metrics["rounds"] = perm.n
    return res


def lp_par(constraints, objective, perm: Permutation, pool: ForkJoin | None = None) -> LpResult:
    st = _Seidel(constraints, objective, perm)

    def special(k):
        if st.violates(k):
            st.solve(k)

    trace = run_type2(perm.n, st.violates, lambda k: None, special, pool=pool)
    res = st.result(trace)
    res.metrics.update(rounds=trace.rounds, sub_rounds=trace.sub_rounds)
    return res


def objective_value(point, objective) -> float:
    return point[0] * objective[0] + point[1] * objective[1]


def brute_force(constraints, objective, include_bounds: bool = True, tol: float = 1e-9):
    """Best feasible pairwise vertex, or ``None`` if no vertex is feasible.

    Vectorized over all constraint pairs in chunks; feasibility allows
    ``tol`` absolute slack.
    """
    cons = check_constraints(constraints)
    if include_bounds:
        cons = bounding_constraints(objective) + cons
    A = np.array([h.a for h in cons])
    B = np.array([h.b for h in cons])
    C = np.array([h.c for h in cons])
    ox, oy = objective
    best = None
    m = len(cons)
    for i in range(m - 1):
        j = np.arange(i + 1, m)
        det = A[i] * B[j] - B[i] * A[j]
        ok = det != 0.0
        j, det = j[ok], det[ok]
        x = (C[i] * B[j] - B[i] * C[j]) / det
        y = (A[i] * C[j] - C[i] * A[j]) / det
        # chunk feasibility to bound memory
        for s in range(0, len(j), 256):
            xs, ys = x[s:s + 256], y[s:s + 256]
            viol = (np.outer(xs, A) + np.outer(ys, B) - C) > tol
            feas = ~viol.any(axis=1)
            if feas.any():
                vals = ox * xs[feas] + oy * ys[feas]
                k = int(np.argmax(vals))
                if best is None or vals[k] > best[0]:
                    best = (float(vals[k]), (float(xs[feas][k]), float(ys[feas][k])))
    return best


def tangent_instance(n: int, seed: int, box: float | None = 2.0) -> list[Halfplane]:
    """``n`` random half-planes tangent to the unit circle, plus an optional box."""
    rng = Stream(substream_seed(seed, "lp"))
    cons = []
    for _ in range(n):
        th = 2.0 * math.pi * rng.uniform()
        cons.append(Halfplane(math.cos(th), math.sin(th), 1.0))
    if box is not None:
        cons += [Halfplane(1.0, 0.0, box), Halfplane(-1.0, 0.0, box),
                 Halfplane(0.0, 1.0, box), Halfplane(0.0, -1.0, box)]
    return cons


def parse_constraints(lines) -> list[Halfplane]:
    out = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'a b c'")
        try:
            a, b, c = (float(v) for v in parts)
        except ValueError:
            raise ValueError(f"line {lineno}: bad number") from None
        if a == 0.0 and b == 0.0:
            raise ValueError(f"line {lineno}: degenerate normal (0, 0)")
        out.append(Halfplane(a, b, c))
    return out
