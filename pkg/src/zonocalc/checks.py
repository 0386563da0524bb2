"""Registry of named inequality checks.

Every check maps typed geometric inputs to a :class:`CheckResult` oriented so
that ``margin = rhs - lhs >= 0`` means the inequality holds.  Determinant
based checks are exact on rational input; anything that needs a surface area
or a square root runs in floating point with a relative tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

import numpy as np

from . import ellipsoid as ell
from . import lp_cases, polygon2d, steiner
from . import numerics as nm
from . import serialize as ser
from . import submodular as sm
from .ellipsoid import EllipsoidL2
from .numerics import Mode
from .polygon2d import ConvexPolygon
from .result import (
    EQUALITY,
    HOLDS,
    INCONCLUSIVE,
    VIOLATED,
    CheckResult,
    inconclusive,
    judge,
)
from .steiner import SteinerPoly
from .zonotope import (
    Parallelotope,
    Zonotope,
    mixed_volume_with,
    parallelotope_projection_volume,
    projected_surface_area,
    projection_det_sum,
    segment,
    steiner3,
    surface_area,
    volume,
)

# worst first
_SEVERITY = {VIOLATED: 0, INCONCLUSIVE: 1, EQUALITY: 2, HOLDS: 3}


def _is_zero(v: Sequence) -> bool:
    return all(c == 0 for c in v)


def _unit_float(u: Sequence) -> tuple:
    uf = nm.convert_vector(u, Mode.FLOAT)
    norm = math.sqrt(nm.norm_sq(uf))
    return nm.scale(1.0 / norm, uf)


def _zsum(*zs: Zonotope) -> Zonotope:
    """Minkowski sum with sorted generators, so argument order never changes float rounding."""
    out = zs[0]
    for z in zs[1:]:
        out = out + z
    return out.canonical()


def _psum(*ps: ConvexPolygon) -> ConvexPolygon:
    ps = sorted(ps, key=lambda p: p.vertices)
    out = ps[0]
    for p in ps[1:]:
        out = polygon2d.minkowski_sum(out, p)
    return out


def _prod(values, mode: Mode):
    out = nm.convert(1, mode)
    for v in values:
        out = out * v
    return out


def _worst(items: dict) -> tuple[str, CheckResult]:
    """Item with the most severe verdict; earlier items win ties."""
    return min(items.items(), key=lambda kv: _SEVERITY[kv[1].verdict])


def _combine(check_id: str, items: dict, extra: Optional[dict] = None) -> CheckResult:
    """Report the worst item's sides and margin, with every item in the details."""
    name, worst = _worst(items)
    decided = {r.ok for r in items.values() if r.verdict != INCONCLUSIVE}
    details = {
        "items": {k: {"lhs": r.lhs, "rhs": r.rhs, "margin": r.margin, "verdict": r.verdict} for k, r in items.items()},
        "reported_item": name,
        "agree": len(decided) <= 1,
    }
    details.update(extra or {})
    return CheckResult(
        check_id=check_id,
        lhs=worst.lhs,
        rhs=worst.rhs,
        margin=worst.margin,
        mode=worst.mode,
        tolerance=worst.tolerance,
        verdict=worst.verdict,
        reason=worst.reason,
        details=details,
    )


# --------------------------------------------------------------------------
# zonotopes: volumes of sums and projections


def check_logsubmod(A: Zonotope, B: Sequence[Zonotope] = (), B1=None, B2=None) -> CheckResult:
    """``|A|^(m-1) |A + B_1 + ... + B_m| <= prod_i |A + B_i|``; ``B1, B2`` is the m = 2 case."""
    bs = list(B) + [b for b in (B1, B2) if b is not None]
    if not bs:
        raise ValueError("need at least one summand B")
    mode = nm.mode_of_vectors([g for z in [A, *bs] for g in z.generators])
    m = len(bs)
    lhs = volume(A) ** (m - 1) * volume(_zsum(A, *bs))
    rhs = _prod((volume(_zsum(A, b)) for b in bs), mode)
    return judge("logsubmod.zonotope", lhs, rhs, mode=mode, details={"m": m})


def _af(check_id: str, A: Zonotope, Z1: Zonotope, Z2: Zonotope, const) -> CheckResult:
    n = A.dim
    if n < 2:
        return inconclusive(check_id, "needs n >= 2")
    mode = nm.mode_of_vectors([g for z in (A, Z1, Z2) for g in z.generators])
    c = nm.convert(const, mode)
    v1 = mixed_volume_with(A, [Z1])
    v2 = mixed_volume_with(A, [Z2])
    v12 = mixed_volume_with(A, [Z1, Z2])
    return judge(
        check_id,
        volume(A) * v12,
        c * v1 * v2,
        mode=mode,
        details={"V1": v1, "V2": v2, "V12": v12, "constant": c},
    )


def check_local_af(A: Zonotope, Z1: Zonotope, Z2: Zonotope) -> CheckResult:
    """``|A| V(A[n-2], Z1, Z2) <= n/(n-1) V(A[n-1], Z1) V(A[n-1], Z2)``."""
    return _af("localaf.zonotope", A, Z1, Z2, Fraction(A.dim, max(A.dim - 1, 1)))


def check_fenchel2(A: Zonotope, Z1: Zonotope, Z2: Zonotope) -> CheckResult:
    """The same with the constant 2, valid for all convex bodies."""
    return _af("fenchel2.zonotope", A, Z1, Z2, 2)


def _hope_sides(A: Zonotope, u, v):
    """``|A| sum|det(u,v,A_J)|`` and ``sum|det(u,A_J)| sum|det(v,A_J)|``.

    For unit u, v these are the two sides of the projection inequality
    ``|A| |P_[u,v]^perp A| sqrt(1-<u,v>^2) <= |P_u^perp A| |P_v^perp A|``; both
    sides are homogeneous of degree (1, 1) in (u, v), so any nonzero
    vectors can be used.
    """
    su = projection_det_sum(A, [u])
    sv = projection_det_sum(A, [v])
    suv = projection_det_sum(A, [u, v]) if A.dim >= 2 else nm.zero(A.mode)
    vol = volume(A)
    return vol * suv, su * sv, {"volume": vol, "S_u": su, "S_v": sv, "S_uv": suv}


def check_hope(A: Zonotope, u, v) -> CheckResult:
    """Projection inequality for zonoids in R^3 along two directions."""
    cid = "hope.r3"
    if A.dim != 3:
        raise ValueError("hope.r3 needs a zonotope in R^3")
    if _is_zero(u) or _is_zero(v):
        return inconclusive(cid, "zero direction", A.mode)
    lhs, rhs, det = _hope_sides(A, u, v)
    return judge(cid, lhs, rhs, details=det)


def hope_matrix_sides(A: Zonotope):
    """Coordinate form with u = e1, v = e2, written out for generators (x_i, y_i, z_i)."""
    g = A.generators
    mode = A.mode
    zero = nm.zero(mode)
    vol = zero
    for a, b, c in itertools.combinations(g, 3):
        vol += abs(
            a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
        )
    yz = sum((abs(a[1] * b[2] - b[1] * a[2]) for a, b in itertools.combinations(g, 2)), zero)
    xz = sum((abs(a[0] * b[2] - b[0] * a[2]) for a, b in itertools.combinations(g, 2)), zero)
    zs = sum((abs(a[2]) for a in g), zero)
    return vol * zs, yz * xz


def check_hope_matrix(A: Zonotope) -> CheckResult:
    """``sum|det3| sum|z_i| <= sum|y_i z_j - y_j z_i| sum|x_i z_j - x_j z_i|``."""
    if A.dim != 3:
        raise ValueError("hope.matr needs a zonotope in R^3")
    lhs, rhs = hope_matrix_sides(A)
    return judge("hope.matr", lhs, rhs, mode=A.mode)


def check_weak(A: Zonotope, B: Zonotope, u) -> CheckResult:
    """``|A+B| / |P(A+B)| >= |A| / |PA|`` along ``u^perp``, cross-multiplied."""
    cid = "weak.zonotope"
    if _is_zero(u):
        return inconclusive(cid, "zero direction", A.mode)
    ab = _zsum(A, B)
    pa, pab = projection_det_sum(A, [u]), projection_det_sum(ab, [u])
    if pa == 0 or pab == 0:
        return inconclusive(cid, "zero projection", A.mode)
    return judge(cid, volume(A) * pab, volume(ab) * pa)


def check_constrong(A: Zonotope, B: Zonotope, u) -> CheckResult:
    """``|A+B| / |P(A+B)| >= |A| / |PA| + |B| / |PB|`` (open for zonoids; a probe)."""
    cid = "constrong.zonotope"
    if _is_zero(u):
        return inconclusive(cid, "zero direction", A.mode)
    ab = _zsum(A, B)
    ps = [projection_det_sum(x, [u]) for x in (A, B, ab)]
    if any(p == 0 for p in ps):
        return inconclusive(cid, "zero projection", A.mode)
    return judge(cid, volume(A) / ps[0] + volume(B) / ps[1], volume(ab) / ps[2])


def _surfproj_sides(A: Zonotope, u_hat):
    af = A.to_mode(Mode.FLOAT)
    vol = float(volume(af))
    proj = float(projection_det_sum(af, [u_hat]))
    return vol * projected_surface_area(af, u_hat), surface_area(af) * proj, vol


def check_surfproj(A: Zonotope, u) -> CheckResult:
    """``|A| |d(P_u^perp A)| <= |dA| |P_u^perp A|``; details carry the 2(n-1)/n version."""
    cid = "surfproj.zonotope"
    if A.dim < 2:
        return inconclusive(cid, "needs n >= 2")
    if _is_zero(u):
        return inconclusive(cid, "zero direction")
    lhs, rhs, vol = _surfproj_sides(A, _unit_float(u))
    if vol == 0.0:
        return inconclusive(cid, "flat body")
    c = 2 * (A.dim - 1) / A.dim
    weak = judge(cid, lhs, c * rhs)
    return judge(
        cid,
        lhs,
        rhs,
        details={"weakened_constant": c, "weakened_margin": weak.margin, "weakened_verdict": weak.verdict},
    )


def check_linear_equivalents(A: Zonotope, u, v) -> CheckResult:
    """Five forms of the local inequality on one instance; reports the worst form.

    Per instance, forms 1 and 2 have identical margins, forms 3 and 4 too,
    and form 3 implies form 6.
    """
    cid = "linear.equivalents"
    if A.dim < 2:
        return inconclusive(cid, "needs n >= 2")
    if _is_zero(u) or _is_zero(v):
        return inconclusive(cid, "zero direction", A.mode)
    mode = A.mode
    items: dict[str, CheckResult] = {}
    # form 3: projections along u, v
    lhs3, rhs3, d = _hope_sides(A, u, v)
    items["3"] = judge(cid, lhs3, rhs3, mode=mode)
    # form 4: volumes of sums with the two segments
    au, av = _zsum(A, segment(u)), _zsum(A, segment(v))
    auv = _zsum(A, segment(u), segment(v))
    items["4"] = judge(cid, d["volume"] * volume(auv), volume(au) * volume(av), mode=mode)
    # form 6: t -> |A + t([0,u] + [0,v])| = |A| + t(S_u + S_v) + t^2 S_uv has real roots
    b = d["S_u"] + d["S_v"]
    items["6"] = judge(cid, 4 * d["volume"] * d["S_uv"], b * b, mode=mode)
    vol = float(d["volume"])
    if vol == 0.0:
        items["1"] = inconclusive(cid, "flat body")
        items["2"] = inconclusive(cid, "flat body")
    else:
        uh = _unit_float(u)
        af = A.to_mode(Mode.FLOAT)
        seg = Zonotope(A.dim, (uh,))
        items["1"] = judge(cid, vol * surface_area(_zsum(af, seg)), surface_area(af) * float(volume(_zsum(af, seg))))
        lhs2, rhs2, _ = _surfproj_sides(A, uh)
        items["2"] = judge(cid, lhs2, rhs2)
    return _combine(cid, items, {"S_u": d["S_u"], "S_v": d["S_v"], "S_uv": d["S_uv"], "volume": d["volume"]})


def _frame(frame, n: int, mode: Mode):
    q = [tuple(r) for r in frame] if frame is not None else [tuple(r) for r in nm.identity(n, mode)]
    if any(len(r) != n for r in q):
        raise ValueError("frame dimension mismatch")
    if not nm.is_orthonormal(q, tol=1e-9):
        raise ValueError("frame rows must be orthonormal")
    return q


def _subspace_sides(A: Zonotope, q, I: Sequence[int], J: Sequence[int]):
    """``|A| |P_{E n F} A|`` and ``|P_E A| |P_F A|`` with ``E^perp = span q_I``, ``F^perp = span q_J``."""
    I, J = sorted(set(I)), sorted(set(J))
    if set(I) & set(J):
        raise ValueError("index sets must be disjoint, so that E^perp lies in F")
    if any(not 0 <= i < len(q) for i in I + J):
        raise ValueError("index out of range")
    qi = [q[i] for i in I]
    qj = [q[j] for j in J]
    pe = projection_det_sum(A, qi)
    pf = projection_det_sum(A, qj)
    pef = projection_det_sum(A, qi + qj)
    return volume(A) * pef, pe * pf, {"P_E": pe, "P_F": pf, "P_EF": pef}


def check_zon_equivalents(
    A: Zonotope,
    u,
    v,
    frame=None,
    I: Sequence[int] = (0,),
    J: Sequence[int] = (1,),
    m: Optional[int] = None,
    B: Sequence[Zonotope] = (),
) -> CheckResult:
    """Five equivalent forms of log-submodularity for zonoids, on shared data.

    Item 1 uses ``B[0], B[1]`` (default: the segments u and v), item 2 the
    determinant form in u, v, item 3 the subspaces cut out by rows I and J of
    an orthonormal ``frame``, item 4 its first m rows, item 5 the list B.
    """
    cid = "zon.equivalents"
    n = A.dim
    if n < 2:
        return inconclusive(cid, "needs n >= 2")
    if _is_zero(u) or _is_zero(v):
        return inconclusive(cid, "zero direction", A.mode)
    mode = A.mode
    bs = list(B) or [segment(u), segment(v)]
    q = _frame(frame, n, mode)
    m = n if m is None else m
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    if len(bs) > n:
        raise ValueError("item 5 takes at most n bodies")
    items: dict[str, CheckResult] = {}
    b1, b2 = (bs[0], bs[1]) if len(bs) >= 2 else (segment(u), segment(v))
    vol = volume(A)
    items["1"] = judge(cid, vol * volume(_zsum(A, b1, b2)), volume(_zsum(A, b1)) * volume(_zsum(A, b2)), mode=mode)
    lhs2, rhs2, _ = _hope_sides(A, u, v)
    items["2"] = judge(cid, lhs2, rhs2, mode=mode)
    lhs3, rhs3, _ = _subspace_sides(A, q, I, J)
    items["3"] = judge(cid, lhs3, rhs3, mode=nm.mode_of([lhs3, rhs3]))
    us = q[:m]
    lhs4 = vol ** (m - 1) * projection_det_sum(A, us)
    rhs4 = _prod((projection_det_sum(A, [w]) for w in us), nm.scalar_mode(vol))
    items["4"] = judge(cid, lhs4, rhs4, mode=nm.mode_of([lhs4, rhs4]))
    k = len(bs)
    const = Fraction(n**k * math.factorial(n - k), math.factorial(n))
    lhs5 = vol ** (k - 1) * mixed_volume_with(A, bs)
    rhs5 = nm.convert(const, mode) * _prod((mixed_volume_with(A, [b]) for b in bs), mode)
    items["5"] = judge(cid, lhs5, rhs5, mode=mode)
    return _combine(cid, items, {"m": m, "k": k})


# --------------------------------------------------------------------------
# parallelotopes


def split_equality_predicted(A: Parallelotope, u, v, tol: float = 1e-9) -> bool:
    """Equality case: in edge coordinates ``u = W lam``, ``v = W mu`` with ``lam_i mu_i = 0``."""
    w = A.edge_matrix()
    lam = nm.solve(w, u)
    mu = nm.solve(w, v)
    if A.mode is Mode.EXACT and nm.mode_of(list(u) + list(v)) is Mode.EXACT:
        return all(a * b == 0 for a, b in zip(lam, mu))
    scale = max(abs(x) for x in lam) * max(abs(x) for x in mu)
    return all(abs(a * b) <= tol * scale for a, b in zip(lam, mu))


def check_parallelotope(A: Parallelotope, u, v) -> CheckResult:
    """Projection inequality along u, v for a parallelotope in R^n, with the equality detector."""
    cid = "parallelotope.rn"
    if A.dim < 2:
        return inconclusive(cid, "needs n >= 2")
    if _is_zero(u) or _is_zero(v):
        return inconclusive(cid, "zero direction", A.mode)
    lhs, rhs, det = _hope_sides(A.as_zonotope(), u, v)
    det["equality_predicted"] = split_equality_predicted(A, u, v)
    return judge(cid, lhs, rhs, details=det)


def check_parallelotope_subspaces(A: Parallelotope, I: Sequence[int], J: Sequence[int], frame=None) -> CheckResult:
    """``|A| |P_{E n F} A| <= |P_E A| |P_F A|`` for ``E^perp = span q_I`` inside ``F = (span q_J)^perp``."""
    cid = "parallelotope.subspaces"
    q = _frame(frame, A.dim, A.mode)
    lhs, rhs, det = _subspace_sides(A.as_zonotope(), q, I, J)
    if frame is None:
        # independent route through cube coordinates
        det["cube_formula"] = {
            "P_E": parallelotope_projection_volume(A, I),
            "P_F": parallelotope_projection_volume(A, J),
            "P_EF": parallelotope_projection_volume(A, list(I) + list(J)),
        }
    return judge(cid, lhs, rhs, mode=nm.mode_of([lhs, rhs]), details=det)


# --------------------------------------------------------------------------
# planar bodies


def courtade_exact_verdict(A: ConvexPolygon, B: ConvexPolygon, C: ConvexPolygon) -> Optional[str]:
    """Sign of the square-root inequality decided without square roots (rational input only).

    With ``a = |A||A+B+C|``, ``b = |B||C|``, ``c = |A+B||A+C|`` the inequality
    ``sqrt a + sqrt b <= sqrt c`` holds iff ``c - a - b >= 0`` and ``4ab <= (c-a-b)^2``.
    """
    if nm.mode_of_vectors(A.vertices + B.vertices + C.vertices) is not Mode.EXACT:
        return None
    ar = polygon2d.area
    a = ar(A) * ar(_psum(A, B, C))
    b = ar(B) * ar(C)
    c = ar(_psum(A, B)) * ar(_psum(A, C))
    s = c - a - b
    if s < 0:
        return VIOLATED
    gap = s * s - 4 * a * b
    return HOLDS if gap > 0 else EQUALITY if gap == 0 else VIOLATED


def check_courtade2(A: ConvexPolygon, B: ConvexPolygon, C: ConvexPolygon) -> CheckResult:
    """``sqrt(|A||A+B+C|) + sqrt(|B||C|) <= sqrt(|A+B||A+C|)`` in the plane."""
    ar = polygon2d.area
    aa, bb, cc = (float(ar(x)) for x in (A, B, C))
    abc = float(ar(_psum(A, B, C)))
    ab, ac = float(ar(_psum(A, B))), float(ar(_psum(A, C)))
    lhs = math.sqrt(aa) * math.sqrt(abc) + math.sqrt(bb) * math.sqrt(cc)
    rhs = math.sqrt(ab * ac)
    return judge(
        "courtade.2d", lhs, rhs, mode=Mode.FLOAT, details={"exact_verdict": courtade_exact_verdict(A, B, C)}
    )


def check_bonnesen2(A: ConvexPolygon, B: ConvexPolygon, u) -> CheckResult:
    """``|A+B| >= (w_A + w_B)(|A|/w_A + |B|/w_B)`` with w the projection lengths onto ``u^perp``."""
    cid = "bonnesen.2d"
    mode = nm.mode_of_vectors(A.vertices + B.vertices + (tuple(u),))
    if _is_zero(u):
        return inconclusive(cid, "zero direction", mode)
    wa, wb = polygon2d.projection_length(A, u), polygon2d.projection_length(B, u)
    if wa == 0 or wb == 0:
        return inconclusive(cid, "zero projection", mode)
    ar = polygon2d.area
    lhs = (wa + wb) * (ar(A) / wa + ar(B) / wb)
    return judge(cid, lhs, ar(_psum(A, B)), mode=mode)


def check_fenchel_bon(A: ConvexPolygon, B: ConvexPolygon, C: ConvexPolygon) -> CheckResult:
    """``|C|V(A,B)^2 + |B|V(A,C)^2 + |A|V(B,C)^2 <= |A||B||C| + 2V(A,B)V(A,C)V(B,C)``."""
    ar, mv = polygon2d.area, polygon2d.mixed_area
    a, b, c = ar(A), ar(B), ar(C)
    vab, vac, vbc = mv(A, B), mv(A, C), mv(B, C)
    lhs = c * vab**2 + b * vac**2 + a * vbc**2
    rhs = a * b * c + 2 * vab * vac * vbc
    return judge("fenchel.bon", lhs, rhs, details={"V_AB": vab, "V_AC": vac, "V_BC": vbc})


def check_logsubmod_2d(A: ConvexPolygon, B1: ConvexPolygon, B2: ConvexPolygon) -> CheckResult:
    """``|A||A+B1+B2| <= |A+B1||A+B2|`` for planar convex bodies."""
    ar = polygon2d.area
    return judge(
        "logsubmod.2d", ar(A) * ar(_psum(A, B1, B2)), ar(_psum(A, B1)) * ar(_psum(A, B2))
    )


def check_dct_ratio(A: Zonotope, B: Zonotope) -> CheckResult:
    """Volume-to-surface ratio probes: additive form reported, monotone form in the details."""
    cid = "dct.ratio"
    af, bf = A.to_mode(Mode.FLOAT), B.to_mode(Mode.FLOAT)
    ab = _zsum(af, bf)
    sa, sb, sab = surface_area(af), surface_area(bf), surface_area(ab)
    if min(sa, sb, sab) == 0.0:
        return inconclusive(cid, "zero surface area")
    ra, rb, rab = float(volume(af)) / sa, float(volume(bf)) / sb, float(volume(ab)) / sab
    weak = judge(cid, ra, rab)
    return judge(cid, ra + rb, rab, details={"monotone_margin": weak.margin, "monotone_verdict": weak.verdict})


# --------------------------------------------------------------------------
# L2 sums of ellipsoids


def _float_ell(*es: EllipsoidL2):
    return [e.to_mode(Mode.FLOAT) for e in es]


def _orthonormal_rows(vectors) -> list:
    m = np.asarray([[float(c) for c in v] for v in vectors], dtype=float)
    q, r = np.linalg.qr(m.T)
    if np.min(np.abs(np.diag(r))) <= 1e-12 * max(1.0, float(np.max(np.abs(r)))):
        raise nm.DegenerateError("basis vectors are linearly dependent")
    return [tuple(float(x) for x in col) for col in q.T]


def check_l2_strong(A: EllipsoidL2, B: EllipsoidL2, u) -> CheckResult:
    a, b = _float_ell(A, B)
    if _is_zero(u):
        return inconclusive("l2.strong", "zero direction")
    return ell.strong_check(a, b, _unit_float(u))


def check_l2_det(columns, split: int, direction=None) -> CheckResult:
    return ell.determinant_form_check(columns, split, direction)


def check_l2_proj(A: EllipsoidL2, B: EllipsoidL2, basis) -> CheckResult:
    a, b = _float_ell(A, B)
    return ell.projection_codim_check(a, b, _orthonormal_rows(basis))


def check_l2_mixed(A: EllipsoidL2, B: EllipsoidL2, Z: Sequence[Zonotope]) -> CheckResult:
    a, b = _float_ell(A, B)
    return ell.mixed_check(a, b, [z.to_mode(Mode.FLOAT) for z in Z])


def check_l2_surface(A: EllipsoidL2, B: EllipsoidL2, samples: int = 200_000, seed: int = 0) -> CheckResult:
    a, b = _float_ell(A, B)
    return ell.surface_check(a, b, n_samples=samples, seed=seed)


def check_l2_concavity(
    A: EllipsoidL2, B: EllipsoidL2, kind: str = "projection", u=None, Z: Sequence[Zonotope] = (), seed: int = 0
) -> CheckResult:
    a, b = _float_ell(A, B)
    uf = _unit_float(u) if u is not None and not _is_zero(u) else None
    return ell.concavity_check(a, b, kind=kind, u=uf, zonotopes=Z, seed=seed)


# --------------------------------------------------------------------------
# L_p cases


def check_lp_det(columns, split: int, p=3, direction=None) -> CheckResult:
    return lp_cases.lp_determinant_check(columns, split, p, direction)


def check_lp_gamma(n: int, p=3) -> CheckResult:
    return lp_cases.gamma_ball_check(n, p)


def check_lp_polygon(a, p=4) -> CheckResult:
    return lp_cases.lp_polygon_counterexample(a, p)


# --------------------------------------------------------------------------
# Steiner polynomials


def _disc_sides(r: SteinerPoly):
    """Discriminant split as ``rhs - lhs`` so that ``lhs <= rhs`` means all roots real."""
    if r.degree == 2:
        c, b, a = r.coeffs
        return 4 * a * c, b * b
    d, c, b, a = r.coeffs
    pos = 18 * a * b * c * d + b * b * c * c
    neg = 4 * b**3 * d + 4 * a * c**3 + 27 * a * a * d * d
    return neg, pos


def steiner_root_check(p: SteinerPoly, normalize=1, check_id: str = "steiner.marcus") -> CheckResult:
    """Real-rootedness of a Steiner-type polynomial.

    Roots at 0 are removed first.  A remaining factor of degree 2 or 3 (after
    dividing by ``normalize``) is judged by the sign of its discriminant;
    higher degrees use companion-matrix roots and report
    ``IMAG_TOL - max relative imaginary part`` as the margin.
    """
    k = p.lowest_degree()
    r = p.divided_by_t_power(k)
    if normalize != 1:
        r = r.scaled(1 / normalize)
    details: dict[str, Any] = {"zero_roots": k, "factor": list(r.coeffs)}
    if r.degree >= 1:
        rep = steiner.all_roots_real(r)
        details["roots"] = [[z.real, z.imag] for z in rep.roots]
        details["max_imag"] = rep.max_imag
    if r.degree <= 1:
        return judge(check_id, 0, 0, mode=r.mode, reason="no non-real roots possible", details=details)
    if r.degree <= 3:
        lhs, rhs = _disc_sides(r)
        details["discriminant"] = rhs - lhs
        return judge(check_id, lhs, rhs, mode=r.mode, details=details)
    rep = steiner.all_roots_real(r)
    if rep.real is None:
        return inconclusive(check_id, "roots inside the tolerance band", details=details)
    return judge(check_id, rep.max_imag, steiner.IMAG_TOL, mode=Mode.FLOAT, details=details)


def check_marcus(Z: Optional[Zonotope] = None, flat_disk: Optional[int] = None, coeffs=None) -> CheckResult:
    """Are all roots of a Steiner polynomial real?  Geometric inputs are normalized by pi."""
    given = [x is not None for x in (Z, flat_disk, coeffs)]
    if sum(given) != 1:
        raise ValueError("give exactly one of Z, flat_disk, coeffs")
    if Z is not None:
        return steiner_root_check(steiner3(Z), math.pi)
    if flat_disk is not None:
        return steiner_root_check(steiner.flat_disk_steiner(flat_disk), math.pi)
    return steiner_root_check(SteinerPoly(tuple(coeffs)))


def check_sqrt_concavity(coeffs=None, A: Optional[Zonotope] = None, u=None, v=None) -> CheckResult:
    """Concavity of ``sqrt P`` for a quadratic P; given directly or as ``t -> |A + t([0,u]+[0,v])|``."""
    cid = "steiner.sqrt-concavity"
    if coeffs is not None:
        return steiner.sqrt_concavity_check(SteinerPoly(tuple(coeffs)), cid)
    if A is None or u is None or v is None:
        raise ValueError("give coeffs, or A with u and v")
    _, _, d = _hope_sides(A, u, v)
    b = d["S_u"] + d["S_v"]
    return judge(cid, 4 * d["volume"] * d["S_uv"], b * b, details={"coeffs": [d["volume"], b, d["S_uv"]]})


# --------------------------------------------------------------------------
# set functions


def check_compression(m: int, table, hypergraph, steps=None) -> CheckResult:
    """Compression never increases ``sum F(S)`` for submodular F; greedy steps by default."""
    f = sm.SetFunction(m, tuple(table))
    h = sm.MultiHypergraph(tuple(frozenset(s) for s in hypergraph))
    if steps is None:
        _, steps = sm.greedy_compress(h)
    return sm.compression_sum_check(f, h, [tuple(s) for s in steps])


def check_lattice(m: int, table, multiplicative: bool = False) -> CheckResult:
    """Submodularity of a set function: the local pair with the smallest slack is reported."""
    cid = "submod.lattice"
    f = sm.SetFunction(m, tuple(table))
    t = f.table
    worst = None
    for s in range(1 << m):
        free = [i for i in range(m) if not s >> i & 1]
        for x, y in itertools.combinations(free, 2):
            a, b = s | 1 << x, s | 1 << y
            if multiplicative:
                lhs, rhs = t[a | b] * t[a & b], t[a] * t[b]
            else:
                lhs, rhs = t[a | b] + t[a & b], t[a] + t[b]
            if worst is None or rhs - lhs < worst[1] - worst[0]:
                worst = (lhs, rhs, a, b)
    if worst is None:
        return judge(cid, nm.zero(f.mode), nm.zero(f.mode), mode=f.mode, reason="fewer than two elements")
    lhs, rhs, a, b = worst
    glob = sm.is_submodular_global(f, multiplicative=multiplicative)
    return judge(
        cid,
        lhs,
        rhs,
        mode=f.mode,
        details={"S": list(sm.members(a)), "T": list(sm.members(b)), "global_submodular": glob.submodular},
    )


# --------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Param:
    name: str
    kind: str
    required: bool = True


@dataclass(frozen=True)
class CheckSpec:
    check_id: str
    anchor: str
    params: tuple
    fn: Callable[..., CheckResult] = field(repr=False)
    backed_dims: Optional[tuple] = None  # None: proved in all dimensions; () : open probe

    def proven(self, dim: Optional[int] = None) -> bool:
        if self.backed_dims is None:
            return True
        return dim in self.backed_dims


def _p(spec: str) -> Param:
    name, kind = spec.split(":")
    return Param(name.rstrip("?"), kind, not name.endswith("?"))


def _spec(check_id, anchor, params, fn, backed=None) -> CheckSpec:
    return CheckSpec(check_id, anchor, tuple(_p(s) for s in params.split()), fn, backed)


REGISTRY: dict[str, CheckSpec] = {
    s.check_id: s
    for s in [
        _spec(
            "logsubmod.zonotope",
            "log-submodularity of volume under Minkowski sums of zonoids",
            "A:zonotope B?:zonotopes B1?:zonotope B2?:zonotope",
            check_logsubmod,
            (1, 2, 3),
        ),
        _spec(
            "localaf.zonotope",
            "local Alexandrov-Fenchel form with constant n/(n-1)",
            "A:zonotope Z1:zonotope Z2:zonotope",
            check_local_af,
            (1, 2, 3),
        ),
        _spec(
            "fenchel2.zonotope",
            "Fenchel-type mixed volume inequality with constant 2",
            "A:zonotope Z1:zonotope Z2:zonotope",
            check_fenchel2,
        ),
        _spec(
            "hope.r3",
            "two-direction projection inequality for zonoids in R^3",
            "A:zonotope u:vector v:vector",
            check_hope,
        ),
        _spec(
            "hope.matr",
            "coordinate determinant form of the R^3 projection inequality",
            "A:zonotope",
            check_hope_matrix,
        ),
        _spec(
            "weak.zonotope",
            "monotonicity of volume over hyperplane projection under sums, zonoids",
            "A:zonotope B:zonotope u:vector",
            check_weak,
            (1, 2, 3),
        ),
        _spec(
            "constrong.zonotope",
            "superadditivity of volume over hyperplane projection (open probe)",
            "A:zonotope B:zonotope u:vector",
            check_constrong,
            (2,),
        ),
        _spec(
            "surfproj.zonotope",
            "surface-to-volume ratio of a hyperplane projection",
            "A:zonotope u:vector",
            check_surfproj,
            (2, 3),
        ),
        _spec(
            "linear.equivalents",
            "equivalent forms of the local inequality for linearly invariant classes",
            "A:zonotope u:vector v:vector",
            check_linear_equivalents,
            (2, 3),
        ),
        _spec(
            "zon.equivalents",
            "equivalent forms of log-submodularity for zonoids",
            "A:zonotope u:vector v:vector frame?:vectors I?:ints J?:ints m?:int B?:zonotopes",
            check_zon_equivalents,
            (1, 2, 3),
        ),
        _spec(
            "parallelotope.rn",
            "two-direction projection inequality for parallelotopes, split-basis equality",
            "A:parallelotope u:vector v:vector",
            check_parallelotope,
        ),
        _spec(
            "parallelotope.subspaces",
            "nested-subspace projection inequality for parallelotopes",
            "A:parallelotope I:ints J:ints frame?:vectors",
            check_parallelotope_subspaces,
        ),
        _spec(
            "courtade.2d",
            "square-root sum inequality for planar convex bodies",
            "A:polygon B:polygon C:polygon",
            check_courtade2,
        ),
        _spec(
            "bonnesen.2d",
            "Bonnesen's projection bound for the area of a planar sum",
            "A:polygon B:polygon u:vector",
            check_bonnesen2,
        ),
        _spec(
            "fenchel.bon",
            "Fenchel's three-body mixed area inequality",
            "A:polygon B:polygon C:polygon",
            check_fenchel_bon,
        ),
        _spec(
            "logsubmod.2d",
            "log-submodularity of area for planar convex bodies",
            "A:polygon B1:polygon B2:polygon",
            check_logsubmod_2d,
        ),
        _spec(
            "dct.ratio",
            "volume-to-surface ratio under sums (open probe)",
            "A:zonotope B:zonotope",
            check_dct_ratio,
            (),
        ),
        _spec(
            "l2.strong",
            "projection-ratio superadditivity for L2 sums of ellipsoids",
            "A:ellipsoid B:ellipsoid u:vector",
            check_l2_strong,
        ),
        _spec(
            "l2.det",
            "squared-determinant ratio inequality",
            "columns:vectors split:int direction?:vector",
            check_l2_det,
        ),
        _spec(
            "l2.proj",
            "codimension-k projection ratio for L2 sums",
            "A:ellipsoid B:ellipsoid basis:vectors",
            check_l2_proj,
        ),
        _spec(
            "l2.mixed",
            "mixed-volume ratio for L2 sums against zonotopes",
            "A:ellipsoid B:ellipsoid Z:zonotopes",
            check_l2_mixed,
        ),
        _spec(
            "l2.surface",
            "volume-to-surface ratio for L2 sums (Monte Carlo surface areas)",
            "A:ellipsoid B:ellipsoid samples?:int seed?:int",
            check_l2_surface,
        ),
        _spec(
            "l2.concavity",
            "concavity of the ratio functionals along L2 dilations",
            "A:ellipsoid B:ellipsoid kind?:str u?:vector Z?:zonotopes seed?:int",
            check_l2_concavity,
        ),
        _spec(
            "lp.det",
            "p-power determinant ratio inequality, false for p > 2",
            "columns:vectors split:int p?:number direction?:vector",
            check_lp_det,
            (),
        ),
        _spec(
            "lp.gamma",
            "ball test of the weak Lp inequality, Gamma-function form",
            "n:int p?:number",
            check_lp_gamma,
            (),
        ),
        _spec(
            "lp.polygon",
            "planar octagon family against the Lp projection inequality",
            "a:scalar p?:number",
            check_lp_polygon,
            (),
        ),
        _spec(
            "steiner.marcus",
            "real-rootedness of Steiner polynomials (fails for a flat disk)",
            "Z?:zonotope flat_disk?:int coeffs?:scalars",
            check_marcus,
            (),
        ),
        _spec(
            "steiner.sqrt-concavity",
            "real roots of a quadratic Steiner polynomial, as concavity of its square root",
            "coeffs?:scalars A?:zonotope u?:vector v?:vector",
            check_sqrt_concavity,
            (2, 3),
        ),
        _spec(
            "submod.compression",
            "compressions do not increase sums of a submodular function",
            "m:int table:scalars hypergraph:sets steps?:pairs",
            check_compression,
            (),
        ),
        _spec(
            "submod.lattice",
            "pairwise submodularity of a set function table",
            "m:int table:scalars multiplicative?:bool",
            check_lattice,
            (),
        ),
    ]
}


def list_checks() -> list[CheckSpec]:
    return [REGISTRY[k] for k in sorted(REGISTRY)]


def get_spec(check_id: str) -> CheckSpec:
    try:
        return REGISTRY[check_id]
    except KeyError:
        raise KeyError(f"unknown check {check_id!r}") from None


# --------------------------------------------------------------------------
# parsing inputs and running


_GEOMETRIC = {"zonotope", "zonotopes", "polygon", "ellipsoid", "parallelotope", "vector", "vectors", "scalar", "scalars"}


def _parse_int(x, name: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ser.InputError(f"{name} must be an integer")
    return x


def _parse_value(kind: str, x, mode: Mode, name: str):
    try:
        if kind == "zonotope":
            return ser.parse_zonotope(x, mode)
        if kind == "zonotopes":
            if not isinstance(x, list):
                raise ser.InputError(f"{name} must be a list")
            return tuple(ser.parse_zonotope(z, mode) for z in x)
        if kind == "polygon":
            return ser.parse_polygon(x, mode)
        if kind == "ellipsoid":
            return ser.parse_ellipsoid(x, mode)
        if kind == "parallelotope":
            return ser.parse_parallelotope(x, mode)
        if kind == "vector":
            return ser.parse_vector(x, mode)
        if kind == "vectors":
            return ser.parse_vectors(x, mode)
        if kind == "scalar":
            return ser.parse_scalar(x, mode)
        if kind == "scalars":
            if not isinstance(x, list):
                raise ser.InputError(f"{name} must be a list")
            return tuple(ser.parse_scalar(c, mode) for c in x)
        if kind == "int":
            return _parse_int(x, name)
        if kind == "ints":
            if not isinstance(x, list):
                raise ser.InputError(f"{name} must be a list of integers")
            return tuple(_parse_int(i, name) for i in x)
        if kind == "number":
            if isinstance(x, str):
                return Fraction(x)
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ser.InputError(f"{name} must be a number")
            return x
        if kind == "str":
            if not isinstance(x, str):
                raise ser.InputError(f"{name} must be a string")
            return x
        if kind == "bool":
            if not isinstance(x, bool):
                raise ser.InputError(f"{name} must be true or false")
            return x
        if kind in ("sets", "pairs"):
            if not isinstance(x, list) or not all(isinstance(s, list) for s in x):
                raise ser.InputError(f"{name} must be a list of integer lists")
            out = tuple(tuple(_parse_int(i, name) for i in s) for s in x)
            if kind == "pairs" and any(len(s) != 2 for s in out):
                raise ser.InputError(f"{name} must hold pairs")
            return out
    except ValueError as exc:
        if isinstance(exc, ser.InputError):
            raise
        raise ser.InputError(f"{name}: {exc}") from exc
    raise ser.InputError(f"unknown parameter kind {kind!r}")


def input_mode(spec: CheckSpec, raw: dict) -> Mode:
    values = []
    for p in spec.params:
        if p.kind in _GEOMETRIC and p.name in raw:
            values.extend(ser.raw_scalars(raw[p.name]))
    return ser.detect_mode(values)


def parse_inputs(check_id: str, raw: dict, mode: Optional[Mode] = None) -> tuple[dict, Mode]:
    """Typed keyword arguments for a check from JSON data, plus the resolved mode."""
    spec = get_spec(check_id)
    if not isinstance(raw, dict):
        raise ser.InputError("check input must be a JSON object")
    known = {p.name for p in spec.params}
    extra = sorted(set(raw) - known)
    if extra:
        raise ser.InputError(f"unknown fields for {check_id}: {', '.join(extra)}")
    mode = mode or input_mode(spec, raw)
    kwargs = {}
    for p in spec.params:
        if p.name in raw:
            kwargs[p.name] = _parse_value(p.kind, raw[p.name], mode, p.name)
        elif p.required:
            raise ser.InputError(f"missing field {p.name!r} for {check_id}")
    return kwargs, mode


def run_check(check_id: str, kwargs: dict, seed: Optional[int] = None) -> CheckResult:
    """Evaluate a check on parsed inputs; singular geometry becomes inconclusive."""
    spec = get_spec(check_id)
    try:
        res = spec.fn(**kwargs)
    except nm.DegenerateError as exc:
        res = inconclusive(check_id, str(exc))
    return res.with_witness(ser.to_jsonable(kwargs), seed)


def check_json(check_id: str, raw: dict, mode: Optional[Mode] = None, seed: Optional[int] = None) -> CheckResult:
    kwargs, _ = parse_inputs(check_id, raw, mode)
    return run_check(check_id, kwargs, seed)
