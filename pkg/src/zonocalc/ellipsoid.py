"""Ellipsoids as L2-zonoids: ``E = U B_2^m`` with shape matrix ``Q = U U^T``.

Two routes compute the same squared-determinant sums:

* subsets: ``sum_{|I|=n} det(U_I)^2`` (and the projected analogue), via
  :func:`numerics.det_power_sum`;
* shape: ``det Q`` and the bordered determinant
  ``(-1)^k det([[Q, D], [D^T, 0]]) = sum_{|J|=n-k} det(D, U_J)^2``.

Both are exact on rational input.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import numerics as nm
from .numerics import Mode, Scalar
from .result import DEFAULT_REL_TOL, CheckResult, inconclusive, judge, verdict_for
from .zonotope import Zonotope

ANGLE_TOL = 1e-8
CONCAVITY_GRID = tuple(i / 10 for i in range(31))


@dataclass(frozen=True)
class EllipsoidL2:
    """``U B_2^m`` where the m columns of ``U`` are the given vectors in R^dim."""

    dim: int
    columns: tuple = ()
    shape: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        cols = tuple(nm.vector(c) for c in self.columns)
        if any(len(c) != self.dim for c in cols):
            raise ValueError("column dimension mismatch")
        mode = nm.mode_of_vectors(cols)
        object.__setattr__(self, "columns", cols)
        z = nm.zero(mode)
        q = [[z] * self.dim for _ in range(self.dim)]
        for c in cols:
            for i in range(self.dim):
                for j in range(self.dim):
                    q[i][j] += c[i] * c[j]
        object.__setattr__(self, "shape", tuple(tuple(r) for r in q))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "EllipsoidL2":
        cols = [tuple(c) for c in columns]
        if not cols:
            raise ValueError("dimension unknown for an empty column list")
        return cls(len(cols[0]), tuple(cols))

    @classmethod
    def ball(cls, n: int, radius=1) -> "EllipsoidL2":
        r = Fraction(radius) if isinstance(radius, int) else radius
        return cls(n, tuple(nm.scale(r, e) for e in nm.identity(n)))

    @classmethod
    def from_shape(cls, q: Sequence[Sequence[float]]) -> "EllipsoidL2":
        """Float ellipsoid with a given positive definite shape (Cholesky factor as U)."""
        l = np.linalg.cholesky(np.asarray(q, dtype=float))
        return cls(l.shape[0], tuple(tuple(float(x) for x in col) for col in l.T))

    @property
    def mode(self) -> Mode:
        return nm.mode_of_vectors(self.columns)

    def scaled(self, c) -> "EllipsoidL2":
        return EllipsoidL2(self.dim, tuple(nm.scale(c, col) for col in self.columns))

    def to_mode(self, mode: Mode) -> "EllipsoidL2":
        return EllipsoidL2(self.dim, tuple(nm.convert_vector(c, mode) for c in self.columns))

    def is_full_dimensional(self) -> bool:
        d = nm.det(self.shape)
        if self.mode is Mode.EXACT:
            return d != 0
        scale = max((abs(x) for r in self.shape for x in r), default=0.0)
        return abs(d) > nm.PIVOT_TOL * scale**self.dim


def oplus2(a: EllipsoidL2, b: EllipsoidL2) -> EllipsoidL2:
    """L2 sum: columns concatenate, shape matrices add."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    return EllipsoidL2(a.dim, a.columns + b.columns)


def segment_sum(columns: Sequence[Sequence]) -> EllipsoidL2:
    """``[-u_1, u_1] (+)_2 ... (+)_2 [-u_m, u_m]``."""
    return EllipsoidL2.from_columns(columns)


# --------------------------------------------------------------------------
# squared determinant sums


def _bordered(q: Sequence[Sequence], directions: Sequence[Sequence]) -> list[list]:
    n, k = len(q), len(directions)
    mode = nm.mode_of_vectors(list(q) + list(directions))
    z = nm.zero(mode)
    rows = [list(q[i]) + [d[i] for d in directions] for i in range(n)]
    rows += [list(d) + [z] * k for d in directions]
    return rows


def sq_det_sum(e: EllipsoidL2, directions: Sequence[Sequence] = (), method: str = "shape") -> Scalar:
    """``sum_{|J|=n-k} det(d_1..d_k, U_J)^2`` for k given directions (k = 0 allowed).

    For orthonormal directions this is the squared (n-k)-volume of the
    parallelotope spanned by the rows of the projected generator matrix.
    """
    directions = [nm.vector(d) for d in directions]
    if any(len(d) != e.dim for d in directions):
        raise ValueError("direction dimension mismatch")
    if len(directions) > e.dim:
        raise ValueError("too many directions")
    if method == "subsets":
        if not directions and not e.columns:
            return nm.zero(e.mode)
        return nm.det_power_sum(directions, e.columns, power=2)
    if method != "shape":
        raise ValueError(f"unknown method {method!r}")
    nm.mode_of_vectors(list(e.columns) + directions)
    if not directions:
        return nm.det(e.shape)
    val = nm.det(_bordered(e.shape, directions))
    return val if len(directions) % 2 == 0 else -val


def volume(e: EllipsoidL2, method: str = "shape") -> float:
    """``|B^n| sqrt(det Q)``, or the Cauchy-Binet subset sum with ``method="subsets"``."""
    s = sq_det_sum(e, (), method=method)
    return nm.ball_volume(e.dim) * math.sqrt(max(float(s), 0.0))


def projection_volume(e: EllipsoidL2, basis: Sequence[Sequence], method: str = "shape") -> float:
    """(n-r)-volume of the projection onto the complement of an orthonormal basis."""
    basis = [nm.vector(b) for b in basis]
    if not nm.is_orthonormal(basis):
        raise ValueError("basis is not orthonormal")
    s = sq_det_sum(e, basis, method=method)
    return nm.ball_volume(e.dim - len(basis)) * math.sqrt(max(float(s), 0.0))


def projected_columns(e: EllipsoidL2, basis: Sequence[Sequence]) -> EllipsoidL2:
    """The projected body, in ambient coordinates (columns projected one by one)."""
    basis = [nm.vector(b) for b in basis]
    if not nm.is_orthonormal(basis):
        raise ValueError("basis is not orthonormal")
    cols = []
    for c in e.columns:
        p = c
        for b in basis:
            p = nm.sub(p, nm.scale(nm.dot(c, b), b))
        cols.append(p)
    return EllipsoidL2(e.dim, tuple(cols))


def radial(e: EllipsoidL2, u: Sequence) -> float:
    """``rho_E(u) = 1 / sqrt(<Q^{-1} u, u>)``; needs a full-dimensional body."""
    u = nm.vector(u)
    w = nm.solve(e.shape, nm.convert_vector(u, e.mode))
    return 1.0 / math.sqrt(float(nm.dot(w, nm.convert_vector(u, e.mode))))


def dual_norm_sq(e: EllipsoidL2, u: Sequence) -> Scalar:
    """``<Q^{-1} u, u>``, the squared gauge of u (exact for exact input)."""
    u = nm.convert_vector(nm.vector(u), e.mode)
    return nm.dot(nm.solve(e.shape, u), u)


def equality_case(a: EllipsoidL2, b: EllipsoidL2, u: Sequence, tol: float = ANGLE_TOL) -> bool:
    """Do A and B have parallel tangent hyperplanes at their boundary points in direction u?

    Equivalent to ``Q_A^{-1} u`` parallel to ``Q_B^{-1} u``, i.e. u an
    eigenvector of ``Q_A Q_B^{-1}``.  Exact input is decided exactly; floats
    compare the sine of the angle between the two normals with ``tol``.
    """
    u = nm.vector(u)
    mode = nm.mode_of_vectors(a.columns + b.columns + (u,))
    na = nm.solve(a.shape, u)
    nb = nm.solve(b.shape, u)
    if mode is Mode.EXACT:
        n = len(u)
        return all(na[i] * nb[j] == na[j] * nb[i] for i in range(n) for j in range(i + 1, n))
    x = np.asarray(na, dtype=float)
    y = np.asarray(nb, dtype=float)
    x /= np.linalg.norm(x)
    y /= np.linalg.norm(y)
    residual = x - np.dot(x, y) * y
    return bool(np.linalg.norm(residual) <= tol)


def mixed_volume_segments(e: EllipsoidL2, segments: Sequence[Sequence]) -> float:
    """``V(E[n-k], [0,u_1], ..., [0,u_k])``.

    Equals ``((n-k)!/n!) |u_1 ^ ... ^ u_k| |P_{span(u)^perp} E|``, and the
    product of the last two factors is ``|B^{n-k}| sqrt(sum_J det(u, U_J)^2)``
    without normalizing the u's.
    """
    n, k = e.dim, len(segments)
    s = sq_det_sum(e, segments)
    const = math.factorial(n - k) / math.factorial(n)
    return const * nm.ball_volume(n - k) * math.sqrt(max(float(s), 0.0))


def mixed_volume_zonotopes(e: EllipsoidL2, zonotopes: Sequence[Zonotope]) -> float:
    """``V(E[n-k], Z_1, ..., Z_k)`` by multilinearity over generator choices."""
    if any(z.dim != e.dim for z in zonotopes):
        raise ValueError("dimension mismatch")
    count = math.prod(len(z) for z in zonotopes)
    if count > nm.MAX_PRODUCT:
        raise nm.CapExceeded(f"{count} generator products exceed cap {nm.MAX_PRODUCT}")
    total = 0.0
    for choice in itertools.product(*(z.generators for z in zonotopes)):
        total += mixed_volume_segments(e, choice)
    return total


def surface_area_mc(
    e: EllipsoidL2, n_samples: int = 10**6, rng=None, directions: Optional[np.ndarray] = None
) -> tuple[float, float]:
    """Monte Carlo surface area and its standard error.

    Cauchy's formula with the projection identity for ellipsoids gives
    ``|dE| = n |E| E_u[ sqrt(<Q^{-1} u, u>) ]`` for u uniform on the sphere.
    """
    u = _directions(e.dim, n_samples, rng) if directions is None else directions
    vals = _gauge_samples(e, u)
    factor = e.dim * volume(e)
    return factor * float(vals.mean()), factor * float(vals.std(ddof=1) / math.sqrt(len(vals)))


def _directions(n: int, count: int, rng) -> np.ndarray:
    if rng is None:
        rng = np.random.default_rng(0)
    g = rng.standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _gauge_samples(e: EllipsoidL2, u: np.ndarray) -> np.ndarray:
    q = np.asarray(e.shape, dtype=float)
    qinv = np.linalg.inv(q)
    return np.sqrt(np.einsum("ij,jk,ik->i", u, qinv, u))


# --------------------------------------------------------------------------
# checks


def _ratio_sq(e: EllipsoidL2, basis) -> Optional[float]:
    """``(|E| / |P_E E|)^2``; None when the projection is degenerate."""
    p = projection_volume(e, basis)
    if p == 0.0:
        return None
    return (volume(e) / p) ** 2


def strong_check(a: EllipsoidL2, b: EllipsoidL2, u: Sequence, rel_tol=DEFAULT_REL_TOL) -> CheckResult:
    """Projection-ratio inequality for the L2 sum, in squared form, along a unit u."""
    cid = "l2.strong"
    u = nm.vector(u)
    ab = oplus2(a, b)
    try:
        ra, rb, rab = (_ratio_sq(x, [u]) for x in (a, b, ab))
    except ValueError as exc:
        return inconclusive(cid, str(exc))
    if ra is None or rb is None or rab is None:
        return inconclusive(cid, "degenerate projection")
    details = {}
    if a.is_full_dimensional() and b.is_full_dimensional():
        rho = (radial(a, u), radial(b, u), radial(ab, u))
        details = {
            "radial": list(rho),
            "radial_margin": rho[2] ** 2 - rho[0] ** 2 - rho[1] ** 2,
            "equality_case": equality_case(a, b, u),
        }
    return judge(cid, ra + rb, rab, rel_tol=rel_tol, mode=Mode.FLOAT, details=details)


def projection_codim_check(
    a: EllipsoidL2, b: EllipsoidL2, basis: Sequence[Sequence], rel_tol=DEFAULT_REL_TOL
) -> CheckResult:
    """Codimension-k version with exponent 2/k; ``basis`` spans the orthogonal complement of E."""
    cid = "l2.proj"
    k = len(basis)
    if not 1 <= k <= a.dim:
        return inconclusive(cid, "need 1 <= k <= n")
    ab = oplus2(a, b)
    try:
        rs = [_ratio_sq(x, basis) for x in (a, b, ab)]
    except ValueError as exc:
        return inconclusive(cid, str(exc))
    if any(r is None for r in rs):
        return inconclusive(cid, "degenerate projection")
    ra, rb, rab = (r ** (1.0 / k) for r in rs)
    return judge(cid, ra + rb, rab, rel_tol=rel_tol, mode=Mode.FLOAT, details={"k": k})


def mixed_check(
    a: EllipsoidL2, b: EllipsoidL2, zonotopes: Sequence[Zonotope], rel_tol=DEFAULT_REL_TOL
) -> CheckResult:
    """Mixed-volume version: ``(|X| / V(X[n-k], Z_1..Z_k))^(2/k)`` is superadditive under (+)_2."""
    cid = "l2.mixed"
    k = len(zonotopes)
    if not 1 <= k <= a.dim:
        return inconclusive(cid, "need 1 <= k <= n")
    ab = oplus2(a, b)
    vals = []
    for x in (a, b, ab):
        mv = mixed_volume_zonotopes(x, zonotopes)
        if mv == 0.0:
            return inconclusive(cid, "zero mixed volume")
        vals.append((volume(x) / mv) ** (2.0 / k))
    return judge(cid, vals[0] + vals[1], vals[2], rel_tol=rel_tol, mode=Mode.FLOAT, details={"k": k})


def surface_check(
    a: EllipsoidL2, b: EllipsoidL2, n_samples: int = 10**6, seed: int = 0
) -> CheckResult:
    """``|X|^2 / |dX|^2`` superadditive under (+)_2, with Monte Carlo surface areas.

    All three surface areas use the same sample directions; the tolerance is
    three standard errors of the margin (delta method on the three sample means).
    """
    cid = "l2.surface"
    ab = oplus2(a, b)
    if not (a.is_full_dimensional() and b.is_full_dimensional()):
        return inconclusive(cid, "surface check needs full-dimensional bodies")
    n = a.dim
    u = _directions(n, n_samples, np.random.default_rng(seed))
    samples = np.stack([_gauge_samples(x, u) for x in (a, b, ab)])
    means = samples.mean(axis=1)
    # |X|^2/|dX|^2 = 1 / (n^2 mean^2)
    k = 1.0 / n**2
    lhs = k / means[0] ** 2 + k / means[1] ** 2
    rhs = k / means[2] ** 2
    grad = np.array([2 * k / means[0] ** 3, 2 * k / means[1] ** 3, -2 * k / means[2] ** 3])
    cov = np.cov(samples)
    se = float(math.sqrt(max(grad @ cov @ grad, 0.0) / n_samples))
    res = judge(cid, lhs, rhs, mode=Mode.FLOAT, details={"standard_error": se, "samples": n_samples})
    tol = max(3.0 * se, res.tolerance)
    return replace(res, tolerance=tol, verdict=verdict_for(res.margin, Mode.FLOAT, tol))


def determinant_form_check(
    columns: Sequence[Sequence], split: int, direction: Optional[Sequence] = None
) -> CheckResult:
    """Squared-determinant ratio inequality, evaluated through shape matrices.

    With ``R(X) = det(Q_X) / sum_J det(d, X_J)^2``, asserts
    ``R(first block) + R(second block) <= R(all columns)``.  The direction
    need not be a unit vector: the ratio scales by ``|d|^2`` on every term.
    """
    cid = "l2.det"
    cols = [nm.vector(c) for c in columns]
    if not cols:
        return inconclusive(cid, "no columns")
    n = len(cols[0])
    if not 0 < split < len(cols):
        return inconclusive(cid, "split must leave both blocks non-empty")
    mode = nm.mode_of_vectors(cols)
    d = nm.vector(direction) if direction is not None else nm.identity(n, mode)[0]
    ratios = []
    for block in (cols[:split], cols[split:], cols):
        e = EllipsoidL2(n, tuple(block))
        num = sq_det_sum(e)
        den = sq_det_sum(e, [d])
        if den == 0:
            return inconclusive(cid, "zero projected determinant sum", mode)
        ratios.append(num / den)
    return judge(cid, ratios[0] + ratios[1], ratios[2], mode=mode, details={"ratios": ratios})


def concavity_check(
    a: EllipsoidL2,
    b: EllipsoidL2,
    kind: str = "projection",
    u: Optional[Sequence] = None,
    zonotopes: Sequence[Zonotope] = (),
    grid: Sequence[float] = CONCAVITY_GRID,
    n_samples: int = 20000,
    seed: int = 0,
    rel_tol: float = DEFAULT_REL_TOL,
) -> CheckResult:
    """Midpoint concavity of ``t -> phi(A (+)_2 sqrt(t) B)`` on an evenly spaced grid.

    ``kind`` selects phi: ``projection`` is ``(|X|/|P_{u^perp} X|)^2``,
    ``mixed`` is ``(|X| / V(X[n-k], Z_1..Z_k))^(2/k)``, ``surface`` is
    ``|X|^2/|dX|^2`` with fixed Monte Carlo directions.  The reported margin
    is the smallest second difference ``2 h(t_i) - h(t_{i-1}) - h(t_{i+1})``.
    """
    cid = "l2.concavity"
    a, b = a.to_mode(Mode.FLOAT), b.to_mode(Mode.FLOAT)
    if kind == "projection":
        if u is None:
            raise ValueError("projection concavity needs a direction")
        uf = nm.convert_vector(u, Mode.FLOAT)

        def phi(x):
            r = _ratio_sq(x, [uf])
            return math.nan if r is None else r

    elif kind == "mixed":
        k = len(zonotopes)
        zs = [z.to_mode(Mode.FLOAT) for z in zonotopes]

        def phi(x):
            mv = mixed_volume_zonotopes(x, zs)
            return math.nan if mv == 0 else (volume(x) / mv) ** (2.0 / k)

    elif kind == "surface":
        dirs = _directions(a.dim, n_samples, np.random.default_rng(seed))

        def phi(x):
            return 1.0 / (x.dim * float(_gauge_samples(x, dirs).mean())) ** 2

    else:
        raise ValueError(f"unknown concavity kind {kind!r}")
    values = [phi(oplus2(a, b.scaled(math.sqrt(t)))) for t in grid]
    if any(math.isnan(v) for v in values):
        return inconclusive(cid, "degenerate body on the grid")
    worst = None
    for i in range(1, len(values) - 1):
        lhs = values[i - 1] + values[i + 1]
        rhs = 2 * values[i]
        if worst is None or rhs - lhs < worst[1] - worst[0]:
            worst = (lhs, rhs, i)
    if worst is None:
        return inconclusive(cid, "grid too short")
    lhs, rhs, i = worst
    return judge(
        cid, lhs, rhs, rel_tol=rel_tol, mode=Mode.FLOAT, details={"kind": kind, "t": grid[i], "values": values}
    )
