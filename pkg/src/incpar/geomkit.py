"""2D points, disks and exact geometric predicates.

``orient2d`` and ``incircle`` evaluate the usual determinants in floating
point and accept the sign only when it clears a static forward error bound
(the stage-A bounds of Shewchuk's adaptive predicates).  Otherwise the
determinant is recomputed exactly with Python integers: every finite double is
a dyadic rational, so scaling all inputs by a common power of two makes them
integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .order import substream_seed, uniform_array

EPS = 2.0 ** -53
CCW_BOUND = (3.0 + 16.0 * EPS) * EPS
ICC_BOUND = (10.0 + 96.0 * EPS) * EPS
DOT_BOUND = (3.0 + 16.0 * EPS) * EPS


class Point2D(NamedTuple):
    x: float
    y: float
    id: int = -1


class Disk(NamedTuple):
    cx: float
    cy: float
    radius: float


class GeometryError(ValueError):
    pass


def _sign(v) -> int:
    return int(v > 0) - int(v < 0)


def _as_ints(*vals: float) -> list[int]:
    """Scale dyadic rationals by a common power of two to get integers."""
    ratios = [float(v).as_integer_ratio() for v in vals]
    den = max(d for _, d in ratios)
    return [num * (den // d) for num, d in ratios]


def orient2d_exact(ax, ay, bx, by, cx, cy) -> int:
    ax, ay, bx, by, cx, cy = _as_ints(ax, ay, bx, by, cx, cy)
    return _sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def incircle_exact(ax, ay, bx, by, cx, cy, dx, dy) -> int:
    ax, ay, bx, by, cx, cy, dx, dy = _as_ints(ax, ay, bx, by, cx, cy, dx, dy)
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    det = ((adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
           + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
           + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady))
    return _sign(det)


def _orient_xy(ax, ay, bx, by, cx, cy) -> int:
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    if abs(det) > CCW_BOUND * (abs(detleft) + abs(detright)):
        return _sign(det)
    return orient2d_exact(ax, ay, bx, by, cx, cy)


def _incircle_xy(ax, ay, bx, by, cx, cy, dx, dy) -> int:
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = (alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy)
           + clift * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    if abs(det) > ICC_BOUND * permanent:
        return _sign(det)
    return incircle_exact(ax, ay, bx, by, cx, cy, dx, dy)


def orient2d(a, b, c) -> int:
    """+1 if ``a, b, c`` turn counterclockwise, -1 clockwise, 0 collinear."""
    return _orient_xy(a[0], a[1], b[0], b[1], c[0], c[1])


def incircle_raw(a, b, c, d) -> int:
    """Sign of the in-circle determinant; +1 means inside only when ``a, b, c`` is CCW."""
    return _incircle_xy(a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1])


def incircle(a, b, c, d) -> int:
    """+1 iff ``d`` is strictly inside the circle through ``a, b, c``.

    The orientation of ``a, b, c`` is normalized, so the result does not
    depend on their order.  Collinear ``a, b, c`` raise :class:`GeometryError`.
    """
    o = orient2d(a, b, c)
    if o == 0:
        raise GeometryError("incircle of collinear points")
    return o * incircle_raw(a, b, c, d)


def diametral_sign(a, b, p) -> int:
    """+1 if ``p`` lies strictly inside the circle with diameter ``ab``, 0 on it, -1 outside."""
    ux, uy = a[0] - p[0], a[1] - p[1]
    vx, vy = b[0] - p[0], b[1] - p[1]
    s, t = ux * vx, uy * vy
    dot = s + t
    if abs(dot) > DOT_BOUND * (abs(s) + abs(t)):
        return -_sign(dot)
    ax, ay, bx, by, px, py = _as_ints(a[0], a[1], b[0], b[1], p[0], p[1])
    return -_sign((ax - px) * (bx - px) + (ay - py) * (by - py))


def incircle_batch(ax, ay, bx, by, cx, cy, dx: np.ndarray, dy: np.ndarray) -> np.ndarray:
    """Vectorized :func:`incircle_raw` for one circle against many points."""
    with np.errstate(all="ignore"):
        adx, ady = ax - dx, ay - dy
        bdx, bdy = bx - dx, by - dy
        cdx, cdy = cx - dx, cy - dy
        bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
        cdxady, adxcdy = cdx * ady, adx * cdy
        adxbdy, bdxady = adx * bdy, bdx * ady
        alift = adx * adx + ady * ady
        blift = bdx * bdx + bdy * bdy
        clift = cdx * cdx + cdy * cdy
        det = (alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy)
               + clift * (adxbdy - bdxady))
        permanent = ((np.abs(bdxcdy) + np.abs(cdxbdy)) * alift
                     + (np.abs(cdxady) + np.abs(adxcdy)) * blift
                     + (np.abs(adxbdy) + np.abs(bdxady)) * clift)
        out = np.where(det > 0, 1, np.where(det < 0, -1, 0)).astype(np.int8)
        unsure = np.flatnonzero(~(np.abs(det) > ICC_BOUND * permanent))
    for k in unsure:
        out[k] = incircle_exact(ax, ay, bx, by, cx, cy, float(dx[k]), float(dy[k]))
    return out


def circumdisk(a, b, c) -> Disk:
    """Circle through three non-collinear points."""
    if orient2d(a, b, c) == 0:
        raise GeometryError("circumdisk of collinear points")
    bx, by = b[0] - a[0], b[1] - a[1]
    cx, cy = c[0] - a[0], c[1] - a[1]
    d = 2.0 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return Disk(a[0] + ux, a[1] + uy, math.hypot(ux, uy))


def diameter_disk(a, b) -> Disk:
    cx = (a[0] + b[0]) / 2.0
    cy = (a[1] + b[1]) / 2.0
    return Disk(cx, cy, math.hypot(a[0] - b[0], a[1] - b[1]) / 2.0)


def parse_points(lines: Iterable[str]) -> list[Point2D]:
    """``x y`` per line; ids by line order among non-blank, non-comment lines."""
    pts: list[Point2D] = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'x y', got {raw.strip()!r}")
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            raise ValueError(f"line {lineno}: bad number in {raw.strip()!r}") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"line {lineno}: non-finite coordinate")
        pts.append(Point2D(x, y, len(pts)))
    return pts


def format_points(points: Iterable) -> str:
    return "".join(f"{p[0]!r} {p[1]!r}\n" for p in points)


def as_points(xy) -> list[Point2D]:
    return [Point2D(float(x), float(y), i) for i, (x, y) in enumerate(xy)]


@dataclass(frozen=True)
class PointSet:
    """Coordinates as arrays, the form most algorithms consume."""

    x: np.ndarray
    y: np.ndarray

    @classmethod
    def of(cls, points) -> "PointSet":
        arr = np.asarray([(p[0], p[1]) for p in points], dtype=np.float64).reshape(-1, 2)
        if not np.all(np.isfinite(arr)):
            raise ValueError("non-finite coordinate")
        return cls(arr[:, 0].copy(), arr[:, 1].copy())

    def __len__(self):
        return len(self.x)


def random_points(n: int, seed: int) -> list[Point2D]:
    """``n`` points uniform in the unit square, deterministic in ``seed``."""
    u = uniform_array(substream_seed(seed, "points"), 2 * n).reshape(n, 2)
    return [Point2D(float(x), float(y), i) for i, (x, y) in enumerate(u)]
