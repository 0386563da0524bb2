"""Zonotopes (Minkowski sums of segments) and parallelotopes.

Every volume here comes from sums of absolute determinants over generator
subsets, so exact generators give exact volumes.  Surface areas need
square roots of Gram determinants and are always floats.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import numerics as nm
from .numerics import CapExceeded, Mode, Scalar
from .steiner import SteinerPoly


@dataclass(frozen=True)
class Zonotope:
    """The body ``sum_i [0, u_i]`` in R^dim; no generators means the origin."""

    dim: int
    generators: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        gens = tuple(nm.vector(g) for g in self.generators)
        if any(len(g) != self.dim for g in gens):
            raise ValueError("generator dimension mismatch")
        nm.mode_of_vectors(gens)
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_generators(cls, generators: Sequence[Sequence]) -> "Zonotope":
        gens = [tuple(g) for g in generators]
        if not gens:
            raise ValueError("dimension unknown for an empty generator list")
        return cls(len(gens[0]), tuple(gens))

    @classmethod
    def cube(cls, n: int) -> "Zonotope":
        return cls(n, nm.identity(n))

    @property
    def mode(self) -> Mode:
        return nm.mode_of_vectors(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __add__(self, other: "Zonotope") -> "Zonotope":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return Zonotope(self.dim, self.generators + other.generators)

    def scaled(self, t) -> "Zonotope":
        return Zonotope(self.dim, tuple(nm.scale(t, g) for g in self.generators))

    def canonical(self) -> "Zonotope":
        """Generators sorted by coordinates; order never changes the body."""
        return Zonotope(self.dim, tuple(sorted(self.generators)))

    def to_mode(self, mode: Mode) -> "Zonotope":
        return Zonotope(self.dim, tuple(nm.convert_vector(g, mode) for g in self.generators))


def segment(u: Sequence) -> Zonotope:
    return Zonotope(len(u), (tuple(u),))


def point(dim: int) -> Zonotope:
    return Zonotope(dim, ())


def volume(z: Zonotope) -> Scalar:
    """``sum_{|I|=n} |det(u_I)|``; zero when there are fewer than n generators."""
    if len(z) < z.dim:
        return nm.zero(z.mode)
    return nm.det_power_sum((), z.generators)


def _check_basis(basis: Sequence[Sequence], dim: int) -> None:
    if any(len(b) != dim for b in basis):
        raise ValueError("basis dimension mismatch")
    if len(basis) > dim:
        raise ValueError("more basis vectors than dimensions")
    if not nm.is_orthonormal(basis):
        raise ValueError("basis is not orthonormal")


def project(z: Zonotope, basis: Sequence[Sequence]) -> Zonotope:
    """Orthogonal projection onto the complement of span(basis), in ambient coordinates."""
    basis = [tuple(b) for b in basis]
    _check_basis(basis, z.dim)
    gens = []
    for u in z.generators:
        p = u
        for b in basis:
            p = nm.sub(p, nm.scale(nm.dot(u, b), b))
        gens.append(p)
    return Zonotope(z.dim, tuple(gens))


def projection_det_sum(z: Zonotope, directions: Sequence[Sequence]) -> Scalar:
    """``sum_I |det(d_1..d_r, u_I)|`` for arbitrary (not necessarily unit) directions.

    For orthonormal directions this is the (n-r)-volume of the projection onto
    their orthogonal complement; in general it equals that volume times the
    r-volume of the parallelepiped spanned by the directions.
    """
    directions = [tuple(d) for d in directions]
    if any(len(d) != z.dim for d in directions):
        raise ValueError("direction dimension mismatch")
    k = z.dim - len(directions)
    if k < 0:
        raise ValueError("too many directions")
    if len(z) < k:
        return nm.zero(nm.mode_of_vectors(list(z.generators) + directions))
    return nm.det_power_sum(directions, z.generators)


def projection_volume(z: Zonotope, basis: Sequence[Sequence]) -> Scalar:
    """(n-r)-volume of the projection onto the complement of an orthonormal basis."""
    basis = [tuple(b) for b in basis]
    _check_basis(basis, z.dim)
    return projection_det_sum(z, basis)


def k_volume(z: Zonotope, k: int) -> float:
    """k-dimensional volume of a zonotope whose affine hull has dimension k.

    Rank-aware: sums the k-volumes of all k-parallelepipeds through Gram
    determinants, so it works for flat zonotopes in any ambient frame.
    """
    return nm.gram_sqrt_sum(z.generators, k)


def mixed_volume(slots: Sequence[Zonotope]) -> Scalar:
    """``V(Z_1, ..., Z_n) = (1/n!) sum |det(w_1, ..., w_n)|`` over one generator per slot."""
    if not slots:
        raise ValueError("need n slots")
    n = slots[0].dim
    if len(slots) != n or any(s.dim != n for s in slots):
        raise ValueError("need exactly n zonotopes in R^n")
    if n > nm.MAX_DIM:
        raise CapExceeded(f"dimension {n} exceeds cap {nm.MAX_DIM}")
    count = math.prod(len(s) for s in slots)
    if count > nm.MAX_PRODUCT:
        raise CapExceeded(f"{count} generator products exceed cap {nm.MAX_PRODUCT}")
    mode = nm.mode_of_vectors(g for s in slots for g in s.generators)
    if count == 0:
        return nm.zero(mode)
    if mode is Mode.EXACT:
        int_slots, denom = [], 1
        for s in slots:
            rows, d = nm.integerize(s.generators)
            int_slots.append(rows)
            denom *= d
        total = sum(abs(nm.det_int(list(choice))) for choice in itertools.product(*int_slots))
        return Fraction(total, denom * math.factorial(n))
    arrays = [np.asarray(s.generators, dtype=float) for s in slots]
    total = 0.0
    it = itertools.product(*(range(len(s)) for s in slots))
    while True:
        chunk = list(itertools.islice(it, 65536))
        if not chunk:
            break
        idx = np.asarray(chunk)
        mats = np.stack([arrays[j][idx[:, j]] for j in range(n)], axis=1)
        total += float(np.sum(np.abs(np.linalg.det(mats))))
    return total / math.factorial(n)


def surface_area(z: Zonotope) -> float:
    """``2 sum_{|I|=n-1} vol_{n-1}(u_I)``: facets come in parallel pairs."""
    if z.dim == 1:
        return 2.0 if any(g[0] != 0 for g in z.generators) else 0.0
    return 2.0 * nm.gram_sqrt_sum(z.generators, z.dim - 1)


def steiner3(z: Zonotope) -> SteinerPoly:
    """Coefficients of ``t -> |Z + t B|`` for a zonotope in R^3."""
    if z.dim != 3:
        raise ValueError("steiner3 needs a zonotope in R^3")
    lengths = sum(math.sqrt(float(nm.norm_sq(g))) for g in z.generators)
    return SteinerPoly(
        (
            float(volume(z)),
            surface_area(z),
            math.pi * lengths,
            4.0 * math.pi / 3.0,
        )
    )


def apply_linear(z: Zonotope, t: Sequence[Sequence]) -> Zonotope:
    rows = [tuple(r) for r in t]
    if len(rows) == 0 or any(len(r) != z.dim for r in rows):
        raise ValueError("matrix shape does not match the zonotope")
    nm.mode_of_vectors(rows + list(z.generators))
    return Zonotope(len(rows), tuple(nm.matvec(rows, g) for g in z.generators))


@dataclass(frozen=True)
class Parallelotope:
    """``base + sum_i [0, w_i]`` with n linearly independent edges."""

    base: tuple
    edges: tuple

    def __post_init__(self):
        base = nm.vector(self.base)
        edges = tuple(nm.vector(e) for e in self.edges)
        n = len(base)
        if len(edges) != n or any(len(e) != n for e in edges):
            raise ValueError("a parallelotope in R^n needs n edges of dimension n")
        nm.mode_of_vectors((base,) + edges)
        if nm.det(edges) == 0:
            raise ValueError("parallelotope edges are linearly dependent")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "edges", edges)

    @property
    def dim(self) -> int:
        return len(self.base)

    @property
    def mode(self) -> Mode:
        return nm.mode_of_vectors((self.base,) + self.edges)

    def as_zonotope(self) -> Zonotope:
        return Zonotope(self.dim, self.edges)

    def edge_matrix(self) -> tuple:
        """Matrix whose columns are the edges (maps the unit cube onto the body)."""
        return nm.transpose(self.edges)


def parallelotope_projection_volume(p: Parallelotope, coord_subset: Sequence[int]) -> Scalar:
    """Volume of the projection onto ``{e_i : i in coord_subset}^perp``.

    Uses the cube-coordinates formula: with ``T`` the edge matrix and
    ``w_i = T^{-1} e_i``, the volume is ``|det T| sum_{|J|=m} |det(w_i^J)|``
    where ``w^J`` keeps the coordinates in J.
    """
    coords = sorted(set(coord_subset))
    n = p.dim
    if any(not 0 <= c < n for c in coords):
        raise ValueError("coordinate index out of range")
    t = p.edge_matrix()
    t_inv = nm.inverse(t)
    w = [tuple(row[c] for row in t_inv) for c in coords]  # columns of T^{-1}
    m = len(coords)
    det_t = abs(nm.det(t))
    if m == 0:
        return det_t
    total = nm.zero(p.mode)
    for j in itertools.combinations(range(n), m):
        total += abs(nm.det([[wi[jj] for jj in j] for wi in w]))
    return det_t * total


def segment_mixed_volume(z: Zonotope, segments: Sequence[Sequence]) -> Scalar:
    """``V(Z[n-k], [0,s_1], ..., [0,s_k]) = ((n-k)!/n!) sum_J |det(s_1..s_k, u_J)|``."""
    n, k = z.dim, len(segments)
    if k > n:
        raise ValueError("more segments than dimensions")
    s = projection_det_sum(z, segments)
    const = Fraction(math.factorial(n - k), math.factorial(n))
    return s * (const if nm.scalar_mode(s) is Mode.EXACT else float(const))


def mixed_volume_with(z: Zonotope, others: Sequence[Zonotope]) -> Scalar:
    """``V(Z[n-k], Z_1, ..., Z_k)`` by multilinearity over one generator per ``Z_i``."""
    if any(o.dim != z.dim for o in others):
        raise ValueError("dimension mismatch")
    count = math.prod(len(o) for o in others)
    if count > nm.MAX_PRODUCT:
        raise CapExceeded(f"{count} generator products exceed cap {nm.MAX_PRODUCT}")
    mode = nm.mode_of_vectors(list(z.generators) + [g for o in others for g in o.generators])
    total = nm.zero(mode)
    for choice in itertools.product(*(o.generators for o in others)):
        total += segment_mixed_volume(z, choice)
    return total


def projected_surface_area(z: Zonotope, u: Sequence) -> float:
    """Boundary measure of ``P_{u^perp} Z`` inside the hyperplane ``u^perp``.

    Gram determinants do not depend on the frame, so the projected generators
    are kept in ambient coordinates.
    """
    uf = nm.convert_vector(u, Mode.FLOAT)
    norm = math.sqrt(nm.norm_sq(uf))
    if norm == 0.0:
        raise ValueError("zero direction")
    uf = nm.scale(1.0 / norm, uf)
    gens = [nm.sub(g, nm.scale(nm.dot(g, uf), uf)) for g in (nm.convert_vector(g, Mode.FLOAT) for g in z.generators)]
    k = z.dim - 2
    if k == 0:
        return 2.0 if any(nm.norm_sq(g) > 0 for g in gens) else 0.0
    return 2.0 * nm.gram_sqrt_sum(gens, k)
