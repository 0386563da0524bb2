"""Steiner-type polynomials: real-rootedness, discriminants, concavity of the square root."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import numerics as nm
from .numerics import Mode
from .result import CheckResult, judge

MAX_DEGREE = 12
IMAG_TOL = 1e-8


@dataclass(frozen=True)
class SteinerPoly:
    """Real polynomial, coefficients listed constant term first."""

    coeffs: tuple

    def __post_init__(self):
        cs = [Fraction(c) if isinstance(c, int) else c for c in self.coeffs]
        nm.mode_of(cs)
        while cs and cs[-1] == 0:
            cs.pop()
        if len(cs) - 1 > MAX_DEGREE:
            raise ValueError(f"degree exceeds {MAX_DEGREE}")
        if any(isinstance(c, float) and not math.isfinite(c) for c in cs):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def mode(self) -> Mode:
        return nm.mode_of(self.coeffs)

    def __call__(self, t):
        acc = nm.zero(self.mode) if self.coeffs else 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self) -> "SteinerPoly":
        return SteinerPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def to_float(self) -> "SteinerPoly":
        return SteinerPoly(tuple(float(c) for c in self.coeffs))

    def lowest_degree(self) -> int:
        """Multiplicity of the root at zero."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        raise ValueError("zero polynomial")

    def divided_by_t_power(self, k: int) -> "SteinerPoly":
        if any(c != 0 for c in self.coeffs[:k]):
            raise ValueError(f"not divisible by t^{k}")
        return SteinerPoly(self.coeffs[k:])

    def scaled(self, c) -> "SteinerPoly":
        return SteinerPoly(tuple(c * a for a in self.coeffs))


# --------------------------------------------------------------------------
# exact polynomial arithmetic for Sturm sequences (lists, constant first)


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_rem(a: list, b: list) -> list:
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    while len(_trim(a)) - 1 >= db and a:
        shift = len(a) - 1 - db
        f = a[-1] / lead
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a.pop()
    return _trim(a)


def sturm_sequence(p: SteinerPoly) -> list[list[Fraction]]:
    if p.mode is not Mode.EXACT:
        raise nm.ModeError("Sturm sequences need exact coefficients")
    seq = [list(p.coeffs), list(p.derivative().coeffs)]
    while seq[-1]:
        r = _poly_rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign_changes(values) -> int:
    signs = [v for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_real_roots(p: SteinerPoly) -> int:
    """Number of distinct real roots, by Sturm's theorem on the whole line."""
    seq = sturm_sequence(p)
    at_pos = [s[-1] for s in seq]
    at_neg = [s[-1] * (-1) ** (len(s) - 1) for s in seq]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def distinct_root_count(p: SteinerPoly) -> int:
    """deg p - deg gcd(p, p'): number of distinct complex roots."""
    seq = sturm_sequence(p)
    return p.degree - (len(seq[-1]) - 1)


@dataclass(frozen=True)
class RootReport:
    real: Optional[bool]  # None: inconclusive (float roots inside the tolerance band)
    roots: tuple
    method: str
    max_imag: float


def all_roots_real(p: SteinerPoly, tol: float = IMAG_TOL) -> RootReport:
    """Decide whether every root of ``p`` is real.

    Exact coefficients: Sturm count of distinct real roots against the number
    of distinct roots.  Float coefficients: companion-matrix eigenvalues;
    imaginary parts up to ``tol`` (relative to ``max(1, |z|)``) count as real,
    above ``sqrt(tol)`` as non-real, in between inconclusive, since
    a double real root moved by ``tol`` splits by about ``sqrt(tol)``.
    """
    if not p.coeffs:
        raise ValueError("zero polynomial")
    if p.degree < 1:
        raise ValueError("degree must be >= 1")
    roots = tuple(complex(z) for z in np.roots([float(c) for c in reversed(p.coeffs)]))
    rel_imag = max((abs(z.imag) / max(1.0, abs(z)) for z in roots), default=0.0)
    if p.mode is Mode.EXACT:
        real = count_real_roots(p) == distinct_root_count(p)
        return RootReport(real, roots, "sturm", rel_imag)
    if rel_imag <= tol:
        real = True
    elif rel_imag > math.sqrt(tol):
        real = False
    else:
        real = None
    return RootReport(real, roots, "companion", rel_imag)


def discriminant(p: SteinerPoly):
    """Discriminant for degree 2 or 3 (exact for exact coefficients)."""
    if p.degree == 2:
        c, b, a = p.coeffs
        return b * b - 4 * a * c
    if p.degree == 3:
        d, c, b, a = p.coeffs
        return 18 * a * b * c * d - 4 * b**3 * d + b * b * c * c - 4 * a * c**3 - 27 * a * a * d * d
    raise ValueError("discriminant implemented for degree 2 and 3 only")


# --------------------------------------------------------------------------
# the flat disk in R^n


def ball_moment(d: int, s: float) -> float:
    """``int_{B^d} (1 - |x|^2)^(s/2) dx = pi^(d/2) Gamma(s/2 + 1) / Gamma(s/2 + 1 + d/2)``."""
    if d == 0:
        return 1.0
    return math.exp(
        (d / 2) * math.log(math.pi) + math.lgamma(s / 2 + 1) - math.lgamma(s / 2 + 1 + d / 2)
    )


def flat_disk_steiner(n: int) -> SteinerPoly:
    """Steiner polynomial ``|Z + tB^n|`` of the unit disk ``Z = B^2 x {0}`` in R^n.

    ``|Z + tB| = pi t^(n-2) int_{B^(n-2)} (1 + t sqrt(1-|x|^2))^2 dx``; expanding
    the square leaves three ball moments.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    d = n - 2
    m0, m1, m2 = (ball_moment(d, s) for s in (0, 1, 2))
    coeffs = [0.0] * d + [math.pi * m0, 2 * math.pi * m1, math.pi * m2]
    return SteinerPoly(tuple(coeffs))


# --------------------------------------------------------------------------


def sqrt_concavity_check(p: SteinerPoly, check_id: str = "steiner.sqrt-concavity") -> CheckResult:
    """Square root of a positive quadratic is concave on t >= 0 iff it has real roots.

    Equivalently ``2 P(0) P''(0) <= P'(0)^2``; reported as ``4ac <= b^2``.
    """
    if p.degree != 2:
        raise ValueError("need a quadratic")
    c, b, a = p.coeffs
    if min(a, b, c) <= 0:
        raise ValueError("coefficients must be positive")
    return judge(check_id, 4 * a * c, b * b, details={"discriminant": b * b - 4 * a * c})
