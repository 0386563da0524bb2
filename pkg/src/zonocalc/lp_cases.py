"""Explicit L_p computations for p != 2: the Gamma threshold, L_p direct sums,
a planar polygon family and the p-power determinant ratio inequality."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import numerics as nm
from .numerics import Mode, Scalar
from .polygon2d import ConvexPolygon, area
from .result import CheckResult, inconclusive, judge

EXACT_POWERS = (1, 2, 3, 4)


@dataclass(frozen=True)
class LpExponent:
    """Exponent ``p >= 1`` with its conjugate ``q`` (``q = inf`` at ``p = 1``)."""

    p: float

    def __post_init__(self):
        if not (isinstance(self.p, (int, float, Fraction)) and self.p >= 1):
            raise ValueError("p must be >= 1")

    @property
    def inv_q(self) -> float:
        return 1.0 - 1.0 / float(self.p)

    @property
    def q(self) -> float:
        return math.inf if self.p == 1 else 1.0 / self.inv_q

    @property
    def is_integral(self) -> bool:
        return float(self.p).is_integer()


def _as_exponent(p) -> LpExponent:
    return p if isinstance(p, LpExponent) else LpExponent(p)


def gamma_ball_check(n: int, p: float) -> CheckResult:
    """Ball test of the weak L_p projection-ratio inequality, in log-Gamma form.

    Holds iff ``lnG((n+1)/2) + lnG((p+n)/2) <= lnG((n+2)/2) + lnG((p+n-1)/2)``,
    which by strict log-convexity of Gamma happens exactly for ``p <= 2``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    p = float(_as_exponent(p).p)
    lhs = nm.ln_gamma((n + 1) / 2) + nm.ln_gamma((p + n) / 2)
    rhs = nm.ln_gamma((n + 2) / 2) + nm.ln_gamma((p + n - 1) / 2)
    return judge("lp.gamma", lhs, rhs, mode=Mode.FLOAT, details={"n": n, "p": p})


def gamma_threshold(n: int, lo: float = 1.0, hi: float = 4.0, tol: float = 1e-12) -> float:
    """Bisection for the sign change of the Gamma-check margin in p."""
    def m(p):
        return gamma_ball_check(n, p).margin

    if not (m(lo) > 0 > m(hi)):
        raise ValueError("no sign change on the bracket")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if m(mid) > 0:
            lo = mid
        elif m(mid) < 0:
            hi = mid
        else:
            return mid
    return (lo + hi) / 2


def direct_sum_constant(n1: int, n2: int, p) -> float:
    """``Gamma(n1/q+1) Gamma(n2/q+1) / Gamma((n1+n2)/q+1)``; refuses ``p = 1``."""
    e = _as_exponent(p)
    if e.p == 1:
        raise ValueError("q = infinity at p = 1: the direct-sum constant is not defined there")
    iq = e.inv_q
    return math.exp(
        math.lgamma(n1 * iq + 1) + math.lgamma(n2 * iq + 1) - math.lgamma((n1 + n2) * iq + 1)
    )


def lp_direct_sum_volume(vol_k, n1: int, vol_l, n2: int, p) -> float:
    """Volume of ``K (+)_p L`` for bodies in complementary coordinate subspaces."""
    return direct_sum_constant(n1, n2, p) * float(vol_k) * float(vol_l)


# --------------------------------------------------------------------------
# planar polygon family


def lp_polygon(a) -> ConvexPolygon:
    """``{|x_i| <= 1, |x_1 +- x_2| <= 2 - a}``, an octagon for ``0 < a < 1``."""
    b = 1 - a
    one = b + a  # keeps the mode of a
    pts = [(one, b), (b, one), (-b, one), (-one, b), (-one, -b), (-b, -one), (b, -one), (one, -b)]
    return ConvexPolygon(tuple(pts))


def lp_polygon_counterexample(a, p) -> CheckResult:
    """Planar L_p counterexample family with ``v = e_1``.

    lhs is ``|A| = 4 - 2a^2``, rhs is ``4(1-a) + 4a(2-a)^(1-p)``.  Exact when a
    is rational and p an integer; the verdict flips at ``a = 2 - 2^(1/p)``.
    """
    e = _as_exponent(p)
    if e.p <= 1:
        raise ValueError("need p > 1")
    if isinstance(a, float) and not 0.0 < a < 1.0 or not isinstance(a, float) and not 0 < a < 1:
        raise ValueError("need 0 < a < 1")
    exact = not isinstance(a, float) and e.is_integral
    if exact:
        a = Fraction(a)
        pi = int(e.p)
        lhs = 4 - 2 * a * a
        rhs = 4 * (1 - a) + 4 * a / (2 - a) ** (pi - 1)
    else:
        a = float(a)
        lhs = 4 - 2 * a * a
        rhs = 4 * (1 - a) + 4 * a * (2 - a) ** (1 - float(e.p))
    return judge(
        "lp.polygon",
        lhs,
        rhs,
        mode=Mode.EXACT if exact else Mode.FLOAT,
        details={"a": a, "p": e.p, "threshold": 2 - 2 ** (1 / float(e.p))},
    )


def lp_surface_integral(poly: ConvexPolygon, v: Sequence, p: float) -> float:
    """``h(v)^p sum_edges |<v, x>|^p h(x)^(1-p) length`` over outward unit edge normals x.

    The polygon must contain the origin in its interior; this is the right
    side of the planar limit inequality, evaluated on the actual polygon.
    """
    vs = [tuple(float(c) for c in q) for q in poly.vertices]
    vf = tuple(float(c) for c in v)

    def h(x):
        return max(q[0] * x[0] + q[1] * x[1] for q in vs)

    total = 0.0
    for i in range(len(vs)):
        (x0, y0), (x1, y1) = vs[i], vs[(i + 1) % len(vs)]
        length = math.hypot(x1 - x0, y1 - y0)
        normal = ((y1 - y0) / length, (x0 - x1) / length)
        hx = h(normal)
        if hx <= 0:
            raise ValueError("origin must be interior")
        total += abs(vf[0] * normal[0] + vf[1] * normal[1]) ** p * hx ** (1 - p) * length
    return h(vf) ** p * total


def lp_polygon_crosscheck(a, p) -> dict:
    """Closed forms against the constructed octagon: areas and right sides."""
    poly = lp_polygon(a)
    closed = lp_polygon_counterexample(a, p)
    return {
        "area": area(poly),
        "area_closed": closed.lhs,
        "rhs_polygon": lp_surface_integral(poly, (1.0, 0.0), float(p)),
        "rhs_closed": float(closed.rhs),
    }


def polygon_flip_point(p, lo=Fraction(1, 10**6), hi=Fraction(999999, 10**6), tol=Fraction(1, 10**11)) -> Fraction:
    """Bisection for the a where the polygon verdict changes from violated to holds."""
    if lp_polygon_counterexample(lo, p).verdict != "violated":
        raise ValueError("lower end of the bracket is not violated")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if lp_polygon_counterexample(mid, p).verdict == "violated":
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


# --------------------------------------------------------------------------
# p-power determinant ratios


def _power_arg(p) -> object:
    e = _as_exponent(p)
    if e.is_integral and int(e.p) in EXACT_POWERS:
        return int(e.p)
    return float(e.p)


def det_ratio(columns: Sequence[Sequence], p, direction: Sequence) -> Optional[Scalar]:
    """``sum_{|I|=n} |det u_I|^p / sum_{|J|=n-1} |det(d, u_J)|^p``; None when 0/0-like."""
    power = _power_arg(p)
    num = nm.det_power_sum((), columns, power=power)
    den = nm.det_power_sum([direction], columns, power=power)
    if den == 0:
        return None
    return num / den


def lp_determinant_check(
    columns: Sequence[Sequence], split: int, p, direction: Optional[Sequence] = None
) -> CheckResult:
    """``R(u_1..u_split) + R(rest) <= R(all)`` with p-th powers of determinants.

    ``split`` is the size of the first block.  Any nonzero direction can
    stand in for a unit one: every ratio scales by ``|d|^p``.  Exact for
    rational columns and ``p`` in {1, 2, 3, 4}.
    """
    cid = "lp.det"
    cols = [nm.vector(c) for c in columns]
    if not cols:
        return inconclusive(cid, "no columns")
    n = len(cols[0])
    if any(len(c) != n for c in cols):
        raise ValueError("column dimension mismatch")
    if not 0 < split < len(cols):
        return inconclusive(cid, "split must leave both blocks non-empty")
    mode = nm.mode_of_vectors(cols)
    d = nm.vector(direction) if direction is not None else nm.identity(n, mode)[0]
    if nm.mode_of_vectors(cols + [d]) is not mode:
        raise nm.ModeError("direction mode differs from the columns")
    ratios = []
    for block in (cols[:split], cols[split:], cols):
        r = det_ratio(block, p, d)
        if r is None:
            return inconclusive(cid, "zero projected determinant sum", mode)
        ratios.append(r)
    exact = all(nm.scalar_mode(r) is Mode.EXACT for r in ratios)
    return judge(
        cid,
        ratios[0] + ratios[1],
        ratios[2],
        mode=Mode.EXACT if exact else Mode.FLOAT,
        details={"ratios": ratios, "p": _as_exponent(p).p, "split": split},
    )


P3_MATRIX_COLUMNS = ((1, 1), (-1, 1), (0, 1))
P3_MATRIX_SPLIT = 2
