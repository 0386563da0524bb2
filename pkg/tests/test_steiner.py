import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from zonocalc import steiner as stn
from zonocalc.steiner import SteinerPoly


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=5))
def test_sturm_on_products_of_linear_factors(roots):
    # product of (t - r) has only real roots
    coeffs = [Fraction(1)]
    for r in roots:
        coeffs = [Fraction(0)] + coeffs
        for i in range(len(coeffs) - 1):
            coeffs[i] -= r * coeffs[i + 1]
    p = SteinerPoly(tuple(coeffs))
    rep = stn.all_roots_real(p)
    assert rep.real is True
    assert stn.count_real_roots(p) == len(set(roots))


def test_complex_roots_detected_both_ways():
    p = SteinerPoly((1, 0, 1))  # t^2 + 1
    assert stn.all_roots_real(p).real is False
    assert stn.all_roots_real(p.to_float()).real is False
    assert stn.discriminant(p) == -4


def test_float_double_root_is_not_declared_complex():
    p = SteinerPoly((1.0, -2.0, 1.0))
    assert stn.all_roots_real(p).real is True


def test_cubic_discriminant():
    p = SteinerPoly((-6, 11, -6, 1))  # (t-1)(t-2)(t-3)
    assert stn.discriminant(p) == 4


@pytest.mark.parametrize("d,s", [(1, 0), (1, 1), (1, 2), (2, 1), (3, 2)])
def test_ball_moments_against_quadrature(d, s):
    area_sphere = 2 * math.pi ** (d / 2) / math.gamma(d / 2)
    val, _ = quad(lambda r: area_sphere * r ** (d - 1) * (1 - r * r) ** (s / 2), 0, 1)
    assert stn.ball_moment(d, s) == pytest.approx(val, rel=1e-10)


def test_flat_disk_n3_coefficients():
    p = stn.flat_disk_steiner(3)
    assert p.coeffs == pytest.approx((0.0, 2 * math.pi, math.pi**2, 4 * math.pi / 3))


def test_flat_disk_against_direct_volume_integral():
    # |D + tB| = pi t^(n-2) int (1 + t sqrt(1-|x|^2))^2 over B^(n-2), n = 3
    t = 0.7
    val, _ = quad(lambda x: math.pi * t * (1 + t * math.sqrt(1 - x * x)) ** 2, -1, 1)
    assert stn.flat_disk_steiner(3)(t) == pytest.approx(val, rel=1e-10)


def test_sqrt_concavity_quadratic():
    assert stn.sqrt_concavity_check(SteinerPoly((1, 2, 1))).verdict == "equality"
    assert stn.sqrt_concavity_check(SteinerPoly((1, 3, 1))).verdict == "holds"
    assert stn.sqrt_concavity_check(SteinerPoly((1, 1, 1))).verdict == "violated"


def test_degree_cap():
    with pytest.raises(ValueError):
        SteinerPoly(tuple([1] * (stn.MAX_DEGREE + 2)))
