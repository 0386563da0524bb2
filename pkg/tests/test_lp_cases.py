import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zonocalc import lp_cases as lp
from zonocalc import polygon2d as pg


def test_p3_matrix_margin():
    r = lp.lp_determinant_check(lp.P3_MATRIX_COLUMNS, lp.P3_MATRIX_SPLIT, 3)
    assert r.margin == Fraction(-2, 3) and r.verdict == "violated"


def test_p2_is_equality_on_p3_matrix():
    r = lp.lp_determinant_check(lp.P3_MATRIX_COLUMNS, lp.P3_MATRIX_SPLIT, 2)
    assert r.verdict in ("holds", "equality")


@pytest.mark.parametrize("n", range(2, 9))
def test_gamma_threshold_is_two(n):
    assert lp.gamma_threshold(n) == pytest.approx(2.0, abs=1e-9)


def test_gamma_check_sides():
    assert lp.gamma_ball_check(3, 1.5).verdict == "holds"
    assert lp.gamma_ball_check(3, 3).verdict == "violated"


@given(st.integers(2, 6), st.integers(2, 6), st.floats(1.1, 6))
def test_direct_sum_constant_symmetric_and_below_one(n1, n2, p):
    c = lp.direct_sum_constant(n1, n2, p)
    assert c == pytest.approx(lp.direct_sum_constant(n2, n1, p))
    assert 0 < c <= 1


def test_direct_sum_constant_p2_of_two_segments():
    # [-1,1] (+)_2 [-1,1] is the disk of radius 1: pi = c * 2 * 2
    assert lp.direct_sum_constant(1, 1, 2) * 4 == pytest.approx(math.pi)


def test_direct_sum_refuses_p1():
    with pytest.raises(ValueError):
        lp.direct_sum_constant(1, 1, 1)


def test_polygon_family_shape():
    a = Fraction(1, 2)
    p = lp.lp_polygon(a)
    assert len(p) == 8
    assert pg.area(p) == 4 - 2 * a * a


@pytest.mark.parametrize("p", [3, 4, 8])
def test_polygon_flip_point(p):
    assert float(lp.polygon_flip_point(p)) == pytest.approx(2 - 2 ** (1 / p), abs=1e-10)


def test_polygon_crosscheck_surface_integral():
    cc = lp.lp_polygon_crosscheck(0.5, 4)
    assert cc["area"] == pytest.approx(cc["area_closed"])
    assert cc["rhs_polygon"] == pytest.approx(cc["rhs_closed"])


def test_exact_and_float_agree():
    e = lp.lp_polygon_counterexample(Fraction(3, 10), 3)
    f = lp.lp_polygon_counterexample(0.3, 3)
    assert float(e.margin) == pytest.approx(f.margin)
    assert e.verdict == f.verdict
