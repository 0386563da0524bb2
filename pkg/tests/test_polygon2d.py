from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from shapely.geometry import MultiPoint

from zonocalc import polygon2d as pg

points = st.lists(st.tuples(st.integers(-8, 8), st.integers(-8, 8)), min_size=1, max_size=10)


def shapely_hull(pts):
    return MultiPoint([tuple(map(float, p)) for p in pts]).convex_hull


@given(points)
def test_area_matches_shapely(pts):
    p = pg.ConvexPolygon(tuple(pts))
    assert float(pg.area(p)) == pytest.approx(shapely_hull(pts).area)


@given(points)
def test_canonical_form_is_ccw_from_lowest(pts):
    p = pg.ConvexPolygon(tuple(pts))
    vs = p.vertices
    assert vs[0] == min(vs, key=lambda v: (v[1], v[0]))
    if len(vs) >= 3:
        assert pg.area(p) > 0


@given(points, points)
def test_minkowski_sum_matches_pointwise_hull(a, b):
    p, q = pg.ConvexPolygon(tuple(a)), pg.ConvexPolygon(tuple(b))
    s = pg.minkowski_sum(p, q)
    brute = pg.ConvexPolygon(tuple((x[0] + y[0], x[1] + y[1]) for x in p.vertices for y in q.vertices))
    assert s.vertices == brute.vertices


@given(points, points)
def test_mixed_area_polarization(a, b):
    p, q = pg.ConvexPolygon(tuple(a)), pg.ConvexPolygon(tuple(b))
    m = pg.mixed_area(p, q)
    assert m == pg.mixed_area(q, p)
    assert m >= 0
    assert m * m >= pg.area(p) * pg.area(q)  # Minkowski's planar inequality


def test_square_values():
    s = pg.square(2)
    assert pg.area(s) == 4
    assert pg.perimeter(s) == pytest.approx(8.0)
    assert pg.projection_length(s, (1, 0)) == 2


def test_segment_and_point():
    seg = pg.ConvexPolygon(((0, 0), (2, 2), (1, 1)))
    assert len(seg) == 2 and pg.area(seg) == 0
    assert pg.perimeter(seg) == pytest.approx(2 * 8**0.5)
    assert len(pg.ConvexPolygon(((3, 4),))) == 1


def test_rejects_wrong_dimension():
    with pytest.raises(ValueError):
        pg.ConvexPolygon(((0, 0, 0),))


def test_random_polygon_exact_mode():
    rng = np.random.default_rng(0)
    p = pg.random_polygon(rng, 6, scale=10, exact=True)
    assert all(isinstance(x, Fraction) for v in p.vertices for x in v)
