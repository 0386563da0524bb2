"""Dual-mode scalars and the small dense linear algebra used everywhere else.

Exact values are :class:`fractions.Fraction` (Python ints are accepted and
treated as exact); float values are plain IEEE doubles.  Arithmetic never
mixes the two: every entry point that takes a collection of scalars checks
that they share one mode and raises :class:`ModeError` otherwise.  Use
:func:`to_exact` / :func:`to_float` to convert explicitly.
"""

from __future__ import annotations

import enum
import itertools
import math
import os
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

Scalar = Union[Fraction, float]
Vector = tuple  # tuple of Scalar, one mode
Matrix = tuple  # tuple of row tuples

MAX_DIM = 12
MAX_GENERATORS = 24
MAX_PRODUCT = 10**7
DEFAULT_MAX_SUBSETS = math.comb(MAX_GENERATORS, MAX_DIM)
PIVOT_TOL = 1e-12

# float subset sums are evaluated with numpy in chunks of this many matrices
_BATCH = 65536


class Mode(str, enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


class ModeError(TypeError):
    """Raised when exact and float scalars meet in one operation."""


class CapExceeded(ValueError):
    """Raised when an enumeration would exceed a configured cap."""


class DegenerateError(ValueError):
    """Raised when an operation needs a non-singular input and gets one."""


def max_subsets() -> int:
    """Subset-enumeration cap; ``ZONOCALC_MAX_SUBSETS`` overrides the default."""
    raw = os.environ.get("ZONOCALC_MAX_SUBSETS")
    if raw:
        return int(raw)
    return DEFAULT_MAX_SUBSETS


def scalar_mode(x) -> Mode:
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (Fraction, int)):
        return Mode.EXACT
    if isinstance(x, float):
        return Mode.FLOAT
    raise TypeError(f"not a scalar: {x!r}")


def mode_of(values: Iterable) -> Mode:
    """Common mode of a flat iterable of scalars (exact if empty)."""
    found = None
    for x in values:
        m = scalar_mode(x)
        if found is None:
            found = m
        elif m is not found:
            raise ModeError("mixed exact and float scalars")
    return found or Mode.EXACT


def mode_of_vectors(vectors: Iterable[Sequence]) -> Mode:
    return mode_of(x for v in vectors for x in v)


def to_exact(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def to_float(x) -> float:
    return float(x)


def convert(x, mode: Mode):
    return to_exact(x) if mode is Mode.EXACT else to_float(x)


def convert_vector(v: Sequence, mode: Mode) -> Vector:
    return tuple(convert(x, mode) for x in v)


def vector(coords: Sequence) -> Vector:
    """Validate a coordinate sequence and return it as a tuple."""
    v = tuple(Fraction(x) if isinstance(x, int) else x for x in coords)
    if not v:
        raise ValueError("vectors need dim >= 1")
    mode_of(v)
    return v


def zero(mode: Mode) -> Scalar:
    return Fraction(0) if mode is Mode.EXACT else 0.0


def dot(u: Sequence, v: Sequence) -> Scalar:
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    mode_of(itertools.chain(u, v))
    return sum((a * b for a, b in zip(u, v)), zero(scalar_mode(u[0])) if u else 0)


def norm_sq(u: Sequence) -> Scalar:
    return dot(u, u)


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def scale(c, u: Sequence) -> Vector:
    return tuple(c * a for a in u)


def transpose(rows: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*rows))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def identity(n: int, mode: Mode = Mode.EXACT) -> Matrix:
    one, nil = convert(1, mode), zero(mode)
    return tuple(tuple(one if i == j else nil for j in range(n)) for i in range(n))


def is_orthonormal(basis: Sequence[Sequence], tol: float = 1e-12) -> bool:
    """Exact test for exact input; ``tol`` absolute for floats."""
    if not basis:
        return True
    mode = mode_of_vectors(basis)
    for i, u in enumerate(basis):
        for j, v in enumerate(basis[i:], start=i):
            target = 1 if i == j else 0
            d = dot(u, v)
            if mode is Mode.EXACT:
                if d != target:
                    return False
            elif abs(d - target) > tol:
                return False
    return True


# --------------------------------------------------------------------------
# determinants


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def common_denominator(values: Iterable[Fraction]) -> int:
    return reduce(_lcm, (Fraction(x).denominator for x in values), 1)


def integerize(vectors: Sequence[Sequence]) -> tuple[list[tuple[int, ...]], int]:
    """Scale exact vectors by a common denominator ``D`` to integers."""
    d = common_denominator(x for v in vectors for x in v)
    rows = [tuple(int(Fraction(x) * d) for x in v) for v in vectors]
    return rows, d


def det_int(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by Bareiss fraction-free elimination."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        (a, b), (c, d) = rows
        return a * d - b * c
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def _det_float(rows: Sequence[Sequence[float]]) -> float:
    m = [list(map(float, r)) for r in rows]
    n = len(m)
    result = 1.0
    for k in range(n):
        p = max(range(k, n), key=lambda r: abs(m[r][k]))
        if m[p][k] == 0.0:
            return 0.0
        if p != k:
            m[k], m[p] = m[p], m[k]
            result = -result
        pivot = m[k][k]
        result *= pivot
        for i in range(k + 1, n):
            f = m[i][k] / pivot
            if f:
                row_i, row_k = m[i], m[k]
                for j in range(k + 1, n):
                    row_i[j] -= f * row_k[j]
    return result


def det(rows: Sequence[Sequence]) -> Scalar:
    """Determinant of a square matrix given as a sequence of rows.

    Exact input is scaled row by row to integers and reduced with Bareiss
    elimination; float input uses partially pivoted Gaussian elimination.
    """
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("det needs a square matrix")
    if n > MAX_DIM:
        raise CapExceeded(f"dimension {n} exceeds cap {MAX_DIM}")
    if n == 0:
        return Fraction(1)
    if mode_of_vectors(rows) is Mode.FLOAT:
        return _det_float(rows)
    scales = []
    int_rows = []
    for r in rows:
        ir, d = integerize([r])
        int_rows.append(ir[0])
        scales.append(d)
    return Fraction(det_int(int_rows), math.prod(scales))


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Vector:
    """Solve ``M x = rhs`` by Gaussian elimination with partial pivoting.

    Raises :class:`DegenerateError` for a singular matrix (exactly singular in
    exact mode, pivot below ``PIVOT_TOL`` times the largest entry in float).
    """
    n = len(rows)
    mode = mode_of(itertools.chain((x for r in rows for x in r), rhs))
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    scale_ = max((abs(x) for r in rows for x in r), default=0)
    for k in range(n):
        p = max(range(k, n), key=lambda r: abs(m[r][k]))
        piv = m[p][k]
        if piv == 0 or (mode is Mode.FLOAT and abs(piv) <= PIVOT_TOL * scale_):
            raise DegenerateError("singular matrix")
        m[k], m[p] = m[p], m[k]
        for i in range(k + 1, n):
            f = m[i][k] / piv
            if f:
                for j in range(k, n + 1):
                    m[i][j] -= f * m[k][j]
    x = [zero(mode)] * n
    for i in reversed(range(n)):
        s = m[i][n] - sum(m[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / m[i][i]
    return tuple(x)


def inverse(rows: Sequence[Sequence]) -> Matrix:
    n = len(rows)
    mode = mode_of_vectors(rows)
    eye = identity(n, mode)
    cols = [solve(rows, eye[j]) for j in range(n)]
    return transpose(cols)


def cayley(skew: Sequence[Sequence]) -> Matrix:
    """Orthogonal matrix ``(I - S)(I + S)^{-1}`` for skew-symmetric S; rational in, rational out."""
    n = len(skew)
    if any(skew[i][j] != -skew[j][i] for i in range(n) for j in range(n)):
        raise ValueError("matrix is not skew-symmetric")
    mode = mode_of_vectors(skew)
    eye = identity(n, mode)
    plus = [[eye[i][j] + skew[i][j] for j in range(n)] for i in range(n)]
    minus = [[eye[i][j] - skew[i][j] for j in range(n)] for i in range(n)]
    return matmul(minus, inverse(plus))


def gram_det(vectors: Sequence[Sequence]) -> Scalar:
    """det of the Gram matrix (exact for exact input)."""
    if not vectors:
        return Fraction(1)
    dims = {len(v) for v in vectors}
    if len(dims) != 1:
        raise ValueError("dimension mismatch")
    g = [[dot(u, v) for v in vectors] for u in vectors]
    return det(g)


def gram_det_sqrt(vectors: Sequence[Sequence]) -> float:
    """k-volume of the parallelepiped spanned by ``vectors``; 0 when dependent."""
    if vectors and len(vectors) > len(vectors[0]):
        return 0.0
    g = gram_det(vectors)
    return math.sqrt(max(float(g), 0.0))


# --------------------------------------------------------------------------
# subset sums of determinants


def combinations(m: int, k: int) -> Iterator[tuple[int, ...]]:
    """Lexicographic k-subsets of ``range(m)``, streamed."""
    if not 0 <= k <= m:
        raise ValueError("need 0 <= k <= m")
    return itertools.combinations(range(m), k)


def check_subset_cap(m: int, k: int) -> None:
    count = math.comb(m, k)
    if count > max_subsets():
        raise CapExceeded(f"C({m},{k}) = {count} subsets exceeds cap {max_subsets()}")


def det_power_sum(prefix: Sequence[Sequence], vectors: Sequence[Sequence], power=1) -> Scalar:
    """``sum_I |det(prefix, vectors_I)| ** power`` over subsets completing a square matrix.

    ``prefix`` holds r fixed rows, subsets I have size n - r.  Exact input
    with an integral ``power`` gives an exact result; a non-integral power
    forces float.  Rows, not columns: the determinant is invariant under
    transposition, so either reading is fine.
    """
    if not vectors and not prefix:
        return Fraction(0)
    n = len(prefix[0]) if prefix else len(vectors[0])
    if n > MAX_DIM:
        raise CapExceeded(f"dimension {n} exceeds cap {MAX_DIM}")
    k = n - len(prefix)
    if k < 0:
        raise ValueError("prefix longer than the dimension")
    if k > len(vectors):
        return zero(mode_of_vectors(list(prefix) + list(vectors)))
    check_subset_cap(len(vectors), k)
    mode = mode_of_vectors(list(prefix) + list(vectors))
    int_power = isinstance(power, int) or (isinstance(power, Fraction) and power.denominator == 1)
    if mode is Mode.EXACT and int_power:
        power = int(power)
        pre_int, dp = integerize(prefix) if prefix else ([], 1)
        vec_int, dv = integerize(vectors) if vectors else ([], 1)
        total = 0
        for idx in itertools.combinations(range(len(vec_int)), k):
            total += abs(det_int(pre_int + [vec_int[i] for i in idx])) ** power
        return Fraction(total, (dp ** len(prefix) * dv**k) ** power)
    return _det_power_sum_float(prefix, vectors, n, k, float(power))


def _det_power_sum_float(prefix, vectors, n: int, k: int, power: float) -> float:
    pre = np.asarray([[float(x) for x in v] for v in prefix], dtype=float).reshape(len(prefix), n)
    vec = np.asarray([[float(x) for x in v] for v in vectors], dtype=float).reshape(len(vectors), n)
    if k == 0:
        return float(abs(np.linalg.det(pre)) ** power)
    total = 0.0
    it = itertools.combinations(range(len(vectors)), k)
    while True:
        chunk = list(itertools.islice(it, _BATCH))
        if not chunk:
            break
        idx = np.asarray(chunk)
        mats = np.empty((len(chunk), n, n))
        if len(prefix):
            mats[:, : len(prefix), :] = pre
        mats[:, len(prefix) :, :] = vec[idx]
        total += float(np.sum(np.abs(np.linalg.det(mats)) ** power))
    return total


def gram_sqrt_sum(vectors: Sequence[Sequence], k: int) -> float:
    """``sum_{|I|=k} sqrt(det Gram(vectors_I))``: total k-volume of all k-parallelepipeds."""
    if k == 0:
        return 1.0
    if k > len(vectors):
        return 0.0
    check_subset_cap(len(vectors), k)
    vec = np.asarray([[float(x) for x in v] for v in vectors], dtype=float)
    total = 0.0
    it = itertools.combinations(range(len(vectors)), k)
    while True:
        chunk = list(itertools.islice(it, _BATCH))
        if not chunk:
            break
        sel = vec[np.asarray(chunk)]
        gram = sel @ sel.transpose(0, 2, 1)
        total += float(np.sum(np.sqrt(np.clip(np.linalg.det(gram), 0.0, None))))
    return total


# --------------------------------------------------------------------------
# special functions


def ln_gamma(x: float) -> float:
    if x <= 0:
        raise ValueError("ln_gamma needs x > 0")
    return math.lgamma(x)


def ball_volume(n: int) -> float:
    """Volume of the Euclidean unit ball in R^n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)
