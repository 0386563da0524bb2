import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from conftest import as_fractions, int_vectors
from zonocalc import ellipsoid as ell
from zonocalc.ellipsoid import EllipsoidL2, oplus2
from zonocalc.zonotope import Zonotope


def rand_ell(rng, n, m=None):
    m = m or n + 1
    return EllipsoidL2(n, tuple(tuple(float(x) for x in rng.standard_normal(n)) for _ in range(m)))


def test_ball_volume_and_projection():
    b = EllipsoidL2.ball(3)
    assert ell.volume(b) == pytest.approx(4 * math.pi / 3)
    assert ell.projection_volume(b, [(1, 0, 0)]) == pytest.approx(math.pi)


def test_volume_against_monte_carlo():
    rng = np.random.default_rng(5)
    e = rand_ell(rng, 3)
    q = np.asarray(e.shape)
    r = math.sqrt(np.max(np.diag(q)))  # half-width of a bounding box
    pts = rng.uniform(-r, r, size=(400_000, 3))
    inside = np.einsum("ij,jk,ik->i", pts, np.linalg.inv(q), pts) <= 1
    est = inside.mean() * (2 * r) ** 3
    sigma = (2 * r) ** 3 * math.sqrt(inside.mean() * (1 - inside.mean()) / len(pts))
    assert abs(est - ell.volume(e)) <= 4 * sigma


@given(int_vectors(3, 3, 5), int_vectors(3, 1, 2))
def test_shape_and_subset_routes_agree(cols, dirs):
    e = EllipsoidL2(3, as_fractions(cols))
    ds = as_fractions(dirs)
    assert ell.sq_det_sum(e, ds) == ell.sq_det_sum(e, ds, method="subsets")
    assert ell.sq_det_sum(e) == ell.sq_det_sum(e, method="subsets")


def test_oplus2_adds_shapes():
    rng = np.random.default_rng(1)
    a, b = rand_ell(rng, 3), rand_ell(rng, 3)
    assert np.allclose(np.asarray(oplus2(a, b).shape), np.asarray(a.shape) + np.asarray(b.shape))


def test_radial_function_of_ball():
    assert ell.radial(EllipsoidL2.ball(3, 2), (1.0, 0.0, 0.0)) == pytest.approx(2.0)


def test_equality_case_examples():
    a = EllipsoidL2(2, ((Fraction(2), Fraction(0)), (Fraction(0), Fraction(1))))
    b = EllipsoidL2.ball(2)
    assert ell.equality_case(a, b, (1, 0))
    assert not ell.equality_case(a, b, (1, 1))
    af, bf = a.to_mode(ell.Mode.FLOAT), b.to_mode(ell.Mode.FLOAT)
    s = 1 / math.sqrt(2)
    assert not ell.equality_case(af, bf, (s, s))


def test_strong_check_equality_on_shared_eigenbasis():
    rng = np.random.default_rng(2)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    a = EllipsoidL2(3, tuple(tuple(q[:, i] * s) for i, s in enumerate((1.0, 2.0, 3.0))))
    b = EllipsoidL2(3, tuple(tuple(q[:, i] * s) for i, s in enumerate((2.0, 0.5, 1.0))))
    r = ell.strong_check(a, b, tuple(q[:, 1]))
    assert r.verdict in ("equality", "inconclusive") and abs(r.margin) <= 1e-8 * r.rhs
    assert r.details["equality_case"]


def test_strong_check_random_holds():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a, b = rand_ell(rng, 4), rand_ell(rng, 4)
        u = rng.standard_normal(4)
        r = ell.strong_check(a, b, tuple(u / np.linalg.norm(u)))
        assert r.ok


def test_determinant_form_exact():
    cols = as_fractions([(1, 2), (3, -1), (0, 1), (2, 2)])
    r = ell.determinant_form_check(cols, 2)
    assert r.mode is ell.Mode.EXACT and r.verdict in ("holds", "equality")


def test_mixed_volume_segments_matches_zonotope_route():
    rng = np.random.default_rng(4)
    e = rand_ell(rng, 3)
    s = (1.0, 2.0, 0.5)
    assert ell.mixed_volume_segments(e, [s]) == pytest.approx(
        ell.mixed_volume_zonotopes(e, [Zonotope(3, (s,))])
    )


def test_surface_mc_for_ball_is_exact():
    b = EllipsoidL2.ball(3).to_mode(ell.Mode.FLOAT)
    est, se = ell.surface_area_mc(b, 2000, np.random.default_rng(0))
    assert est == pytest.approx(4 * math.pi, rel=1e-9)


def test_surface_mc_for_prolate_spheroid():
    a, c = 1.0, 2.0
    e = EllipsoidL2(3, ((a, 0.0, 0.0), (0.0, a, 0.0), (0.0, 0.0, c)))
    ecc = math.sqrt(1 - a * a / (c * c))
    exact = 2 * math.pi * a * a * (1 + c / (a * ecc) * math.asin(ecc))
    est, se = ell.surface_area_mc(e, 200_000, np.random.default_rng(1))
    assert abs(est - exact) <= 4 * se


@pytest.mark.parametrize("kind", ["projection", "mixed", "surface"])
def test_concavity_checks_hold(kind):
    rng = np.random.default_rng(6)
    a, b = rand_ell(rng, 3), rand_ell(rng, 3)
    kw = {"u": (0.0, 0.0, 1.0)} if kind == "projection" else {}
    if kind == "mixed":
        kw["zonotopes"] = [Zonotope(3, ((1.0, 0.0, 0.0),))]
    if kind == "surface":
        kw["n_samples"] = 4000
    r = ell.concavity_check(a, b, kind=kind, **kw)
    assert r.ok
