"""Convex polygons in the plane: areas, Minkowski sums, mixed areas, widths.

Everything except the perimeter stays exact on rational vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import numerics as nm
from .numerics import Mode, Scalar


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Sequence[Sequence]) -> list[tuple]:
    """Andrew's monotone chain; strictly convex, counter-clockwise output."""
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull


def _rotate_to_start(vs: list) -> list:
    """Start at the lowest vertex, ties broken by lowest x."""
    if not vs:
        return vs
    i = min(range(len(vs)), key=lambda k: (vs[k][1], vs[k][0]))
    return vs[i:] + vs[:i]


@dataclass(frozen=True)
class ConvexPolygon:
    """Convex hull of the given points, stored canonically.

    Vertices are counter-clockwise, in strictly convex position, starting at
    the lowest (then leftmost) vertex.  A single vertex is a point, two are a
    segment.
    """

    vertices: tuple

    def __post_init__(self):
        pts = [nm.vector(p) for p in self.vertices]
        if not pts:
            raise ValueError("a polygon needs at least one point")
        if any(len(p) != 2 for p in pts):
            raise ValueError("polygon vertices must be 2-D")
        nm.mode_of_vectors(pts)
        object.__setattr__(self, "vertices", tuple(_rotate_to_start(convex_hull(pts))))

    @property
    def mode(self) -> Mode:
        return nm.mode_of_vectors(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple]:
        vs = self.vertices
        if len(vs) == 1:
            return []
        return [nm.sub(vs[(i + 1) % len(vs)], vs[i]) for i in range(len(vs))]

    def translated(self, t: Sequence) -> "ConvexPolygon":
        return ConvexPolygon(tuple(nm.add(v, t) for v in self.vertices))

    def scaled(self, c) -> "ConvexPolygon":
        return ConvexPolygon(tuple(nm.scale(c, v) for v in self.vertices))

    def to_mode(self, mode: Mode) -> "ConvexPolygon":
        return ConvexPolygon(tuple(nm.convert_vector(v, mode) for v in self.vertices))


def square(side=1) -> ConvexPolygon:
    s = Fraction(side) if isinstance(side, int) else side
    z = s - s
    return ConvexPolygon(((z, z), (s, z), (s, s), (z, s)))


def area(p: ConvexPolygon) -> Scalar:
    """Shoelace formula."""
    vs = p.vertices
    total = nm.zero(p.mode)
    for i in range(len(vs)):
        x0, y0 = vs[i]
        x1, y1 = vs[(i + 1) % len(vs)]
        total += x0 * y1 - x1 * y0
    return total / 2


def perimeter(p: ConvexPolygon) -> float:
    return sum(math.sqrt(float(nm.norm_sq(e))) for e in p.edges())


def _half(e) -> int:
    x, y = e
    return 0 if y > 0 or (y == 0 and x > 0) else 1


def _angle_before(a, b) -> bool:
    """True when edge direction ``a`` comes strictly before ``b`` in [0, 2pi)."""
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha < hb
    return a[0] * b[1] - a[1] * b[0] > 0


def minkowski_sum(p: ConvexPolygon, q: ConvexPolygon) -> ConvexPolygon:
    """Merge the two edge sequences by angle, starting from the sum of the start vertices."""
    nm.mode_of_vectors(p.vertices + q.vertices)
    ep, eq = p.edges(), q.edges()
    cur = nm.add(p.vertices[0], q.vertices[0])
    out = [cur]
    i = j = 0
    while i < len(ep) or j < len(eq):
        if j >= len(eq) or (i < len(ep) and not _angle_before(eq[j], ep[i])):
            step = ep[i]
            i += 1
        else:
            step = eq[j]
            j += 1
        cur = nm.add(cur, step)
        out.append(cur)
    return ConvexPolygon(tuple(out))


def mixed_area(p: ConvexPolygon, q: ConvexPolygon) -> Scalar:
    """``V(P, Q) = (|P + Q| - |P| - |Q|) / 2``."""
    return (area(minkowski_sum(p, q)) - area(p) - area(q)) / 2


def support_extent(p: ConvexPolygon, d: Sequence) -> Scalar:
    """``max <v, d> - min <v, d>`` over the vertices."""
    vals = [nm.dot(v, d) for v in p.vertices]
    return max(vals) - min(vals)


def projection_length(p: ConvexPolygon, u: Sequence) -> Scalar:
    """Length of the projection onto the line ``u^perp``, scaled by ``|u|``.

    For unit ``u`` this is the true length; callers whose formulas are
    homogeneous in this quantity can pass an unnormalized rational ``u``.
    """
    return support_extent(p, (-u[1], u[0]))


def random_polygon(rng, k: int, scale=1.0, exact: bool = False) -> ConvexPolygon:
    """Convex hull of ``k`` i.i.d. points, redrawn until it has at least 3 vertices.

    Float points are uniform in ``[-scale, scale]^2``; exact points are
    integers uniform in ``[-scale, scale]`` (``scale`` an integer >= 1).
    """
    if k < 3:
        raise ValueError("need k >= 3")
    while True:
        if exact:
            r = int(scale)
            raw = rng.integers(-r, r + 1, size=(k, 2))
            pts = [(Fraction(int(a)), Fraction(int(b))) for a, b in raw]
        else:
            raw = rng.uniform(-scale, scale, size=(k, 2))
            pts = [(float(a), float(b)) for a, b in raw]
        poly = ConvexPolygon(tuple(pts))
        if len(poly) >= 3:
            return poly
