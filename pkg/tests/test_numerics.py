import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zonocalc import numerics as nm
from zonocalc.numerics import Mode


def test_mode_detection():
    assert nm.mode_of([1, Fraction(1, 2)]) is Mode.EXACT
    assert nm.mode_of([1.0, 2.0]) is Mode.FLOAT
    with pytest.raises(nm.ModeError):
        nm.mode_of([Fraction(1, 3), 0.5])


def test_vector_rejects_bad_scalars():
    with pytest.raises(TypeError):
        nm.vector(["a"])


@given(st.lists(st.lists(st.integers(-20, 20), min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_matches_permutation_expansion(rows):
    def leibniz(m):
        n = len(m)
        total = 0
        for perm in itertools.permutations(range(n)):
            sign = 1
            for i in range(n):
                for j in range(i + 1, n):
                    if perm[i] > perm[j]:
                        sign = -sign
            total += sign * math.prod(m[i][perm[i]] for i in range(n))
        return total

    assert nm.det_int(rows) == leibniz(rows)


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3))
def test_float_det_close_to_exact(rows):
    exact = nm.det([[Fraction(x) for x in r] for r in rows])
    approx = nm.det([[float(x) for x in r] for r in rows])
    assert approx == pytest.approx(float(exact), abs=1e-9)


def test_rational_det_and_solve():
    m = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(2), Fraction(5, 7)]]
    assert nm.det(m) == Fraction(1, 2) * Fraction(5, 7) - Fraction(2, 3)
    x = nm.solve(m, [Fraction(1), Fraction(0)])
    assert nm.matvec(m, x) == (1, 0)
    inv = nm.inverse(m)
    assert nm.matmul(m, inv) == nm.identity(2)


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=3, max_size=3))
def test_cayley_gives_rational_orthonormal_frames(entries):
    a, b, c = entries
    s = [[0, a, b], [-a, 0, c], [-b, -c, 0]]
    s = [[Fraction(x) for x in r] for r in s]
    q = nm.cayley(s)
    assert all(isinstance(x, Fraction) for r in q for x in r)
    assert nm.is_orthonormal(q)


def test_det_power_sum_cauchy_binet():
    rng = np.random.default_rng(3)
    vs = [tuple(Fraction(int(x)) for x in rng.integers(-4, 5, 3)) for _ in range(5)]
    direct = sum(abs(nm.det([vs[i] for i in s])) for s in itertools.combinations(range(5), 3))
    assert nm.det_power_sum([], vs) == direct
    assert nm.det_power_sum([], [tuple(map(float, v)) for v in vs]) == pytest.approx(float(direct))
    d = (Fraction(1), Fraction(2), Fraction(-1))
    direct2 = sum(nm.det([d, vs[i], vs[j]]) ** 2 for i, j in itertools.combinations(range(5), 2))
    assert nm.det_power_sum([d], vs, power=2) == direct2


def test_subset_cap(monkeypatch):
    monkeypatch.setenv("ZONOCALC_MAX_SUBSETS", "10")
    vs = [(Fraction(i), Fraction(1), Fraction(i * i)) for i in range(8)]
    with pytest.raises(nm.CapExceeded):
        nm.det_power_sum([], vs)


def test_ball_volume_and_gamma():
    assert nm.ball_volume(2) == pytest.approx(math.pi)
    assert nm.ball_volume(3) == pytest.approx(4 * math.pi / 3)
    assert nm.ln_gamma(5.0) == pytest.approx(math.log(24))


def test_gram_sqrt_sum_is_rank_aware():
    # unit square placed in the plane x + y + z = 0
    a = (1 / math.sqrt(2), -1 / math.sqrt(2), 0.0)
    b = (1 / math.sqrt(6), 1 / math.sqrt(6), -2 / math.sqrt(6))
    assert nm.gram_sqrt_sum([a, b], 2) == pytest.approx(1.0)
