import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mc_disk_area
from kpgeom import planar
from kpgeom.geometry import circumball, regular_simplex

LENS_AREA = 2 * math.pi / 3 - math.sqrt(3) / 2


# -- intersections ------------------------------------------------------------------


def test_single_disk():
    m = planar.disk_intersection_measure([[0.3, -0.2]])
    assert m.area == pytest.approx(math.pi, abs=1e-14)
    assert m.perimeter == pytest.approx(2 * math.pi, abs=1e-14)
    assert m.intrinsic(1) == pytest.approx(math.pi) and m.intrinsic(2) == pytest.approx(math.pi)


def test_tangent_disks_meet_in_a_point():
    body = planar.disk_intersection([[-1.0, 0.0], [1.0, 0.0]])
    assert body.kind == "point"
    assert body.measure() == planar.PlanarMeasure(0.0, 0.0)
    assert planar.disk_intersection([[-1.1, 0.0], [1.1, 0.0]]).kind == "empty"


def test_lens_closed_form():
    m = planar.disk_intersection_measure([[-0.5, 0.0], [0.5, 0.0]])
    assert m.area == pytest.approx(LENS_AREA, abs=1e-13)
    # each arc subtends 2 acos(1/2)
    assert m.perimeter == pytest.approx(4 * math.acos(0.5), abs=1e-13)
    value, err = mc_disk_area([[-0.5, 0.0], [0.5, 0.0]], n=10**7, seed=3)
    assert abs(value - m.area) <= 4 * err


def test_lens_support_and_farthest():
    a = 0.6
    body = planar.disk_intersection([[-a, 0.0], [a, 0.0]])
    assert body.support(np.array([0.0, 1.0])) == pytest.approx(math.sqrt(1 - a * a), abs=1e-14)
    half = planar.disk_intersection([[-0.5, 0.0], [0.5, 0.0]])
    assert half.farthest_distance(np.zeros(2)) == pytest.approx(math.sqrt(3) / 2, abs=1e-14)


def test_boundary_loops_close():
    body = planar.disk_intersection(regular_simplex(2, 1.0))
    loops = body.loops()
    assert len(loops) == 1 and len(loops[0]) == 3
    ring = planar.disk_union([[math.cos(t) * 1.8, math.sin(t) * 1.8] for t in np.linspace(0, 2 * math.pi, 9)[:-1]])
    assert len(ring.loops()) == 2


# -- unions -------------------------------------------------------------------------------


def test_union_examples():
    m = planar.disk_union_measure([[0.0, 0.0], [5.0, 0.0]])
    assert m.area == pytest.approx(2 * math.pi) and m.perimeter == pytest.approx(4 * math.pi)
    m = planar.disk_union_measure([[1.0, 1.0], [1.0, 1.0]])
    assert m.area == pytest.approx(math.pi) and m.perimeter == pytest.approx(2 * math.pi)
    m = planar.disk_union_measure([[-0.5, 0.0], [0.5, 0.0]])
    assert m.area == pytest.approx(2 * math.pi - LENS_AREA, abs=1e-13)


def test_union_with_hole_subtracts_it():
    pts = [[math.cos(t) * 1.8, math.sin(t) * 1.8] for t in np.linspace(0, 2 * math.pi, 9)[:-1]]
    exact = planar.disk_union_measure(pts).area
    value, err = mc_disk_area(pts, kind="union", n=10**6, seed=4)
    assert abs(value - exact) <= 4 * err


centers2 = st.lists(st.tuples(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5)), min_size=2, max_size=2)


@settings(max_examples=200, deadline=None)
@given(centers2)
def test_two_disk_inclusion_exclusion(pts):
    inter = planar.disk_intersection_measure(pts).area
    union = planar.disk_union_measure(pts).area
    assert inter + union == pytest.approx(2 * math.pi, abs=1e-10)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(-0.6, 0.6), st.floats(-0.6, 0.6)), min_size=1, max_size=6),
       st.tuples(st.floats(-0.6, 0.6), st.floats(-0.6, 0.6)))
def test_adding_a_center_is_monotone(pts, extra):
    before_i = planar.disk_intersection_measure(pts)
    after_i = planar.disk_intersection_measure(pts + [extra])
    assert after_i.area <= before_i.area + 1e-12
    assert after_i.perimeter <= before_i.perimeter + 1e-12
    assert planar.disk_union_measure(pts + [extra]).area >= planar.disk_union_measure(pts).area - 1e-12


def test_exact_matches_monte_carlo_on_random_instances():
    rng = np.random.default_rng(7)
    bad = 0
    for i in range(60):
        n = int(rng.integers(2, 7))
        pts = rng.uniform(-0.7, 0.7, size=(n, 2))
        for kind, fn in (("intersection", planar.disk_intersection_measure), ("union", planar.disk_union_measure)):
            exact = fn(pts).area
            value, err = mc_disk_area(pts, kind=kind, n=100_000, seed=i)
            bad += abs(value - exact) > 4 * err + 1e-12
    # at 4 sigma about one miss in 16000 is expected
    assert bad == 0


def test_isoperimetric_and_isodiametric_sanity():
    rng = np.random.default_rng(8)
    for _ in range(100):
        pts = rng.uniform(-0.8, 0.8, size=(int(rng.integers(1, 7)), 2))
        m = planar.disk_intersection_measure(pts)
        if m.area > 0:
            assert m.perimeter >= 2 * math.sqrt(math.pi * m.area) - 1e-10
        u = planar.disk_union_measure(pts)
        diam = max(np.linalg.norm(a - b) for a in pts for b in pts) + 2.0
        assert u.area <= (diam / 2) ** 2 * math.pi + 1e-10


# -- spindle hulls ----------------------------------------------------------------------------


def test_spindle_hull_examples():
    assert planar.spindle_hull_measure([[0.2, 0.1]]) == planar.PlanarMeasure(0.0, 0.0)
    # two points at distance 2 rho: B[X] is the midpoint, so every half circle
    # through both points bounds the hull and it fills the rho-disk
    rho = 1.0
    seg = planar.spindle_hull_measure([[-1.0, 0.0], [1.0, 0.0]], rho)
    assert seg.area == pytest.approx(math.pi, abs=1e-12)
    assert planar.spindle_hull_membership([[-1.0, 0.0], [1.0, 0.0]], rho, [0.0, 0.0])
    near = planar.spindle_hull_measure([[-0.5, 0.0], [0.5, 0.0]], rho)
    # centers of the bounding arcs are the lens vertices (0, +-sqrt(3)/2)
    h = math.sqrt(3) / 2
    assert near.area == pytest.approx(planar.disk_intersection_measure([[0, h], [0, -h]]).area, abs=1e-13)
    tri = planar.spindle_hull_measure(regular_simplex(2, 1.0), 1.0)
    assert tri.perimeter == pytest.approx(math.pi, abs=1e-12)
    assert tri.area == pytest.approx((math.pi - math.sqrt(3)) / 2, abs=1e-12)


def test_spindle_hull_rejects_wide_sets():
    with pytest.raises(ValueError):
        planar.spindle_hull([[-2.0, 0.0], [2.0, 0.0]], 1.0)


def test_duality_selftest_passes():
    assert planar.spindle_duality_selftest() <= 5.0


def test_spindle_hull_contains_generators():
    rng = np.random.default_rng(9)
    for _ in range(50):
        pts = rng.uniform(-0.6, 0.6, size=(int(rng.integers(2, 7)), 2))
        if circumball(pts).radius > 1:
            continue
        hull = planar.spindle_hull(pts, 1.0)
        assert np.all(np.asarray(hull.farthest_distance(pts)) >= 0)
        assert np.all(planar.spindle_hull_membership(pts, 1.0, pts, tol=1e-9))


# -- polygons ---------------------------------------------------------------------------------


SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def test_polygon_union_examples():
    one = planar.polygon_union_measure([SQUARE], seed=0)
    assert one.perimeter == pytest.approx(4.0) and abs(one.area - 1.0) <= 4 * one.area_stderr + 1e-12
    two = planar.polygon_union_measure([SQUARE, SQUARE + [1.0, 0.0]], seed=1)
    assert two.perimeter == pytest.approx(6.0)
    assert abs(two.area - 2.0) <= 4 * two.area_stderr + 1e-12
    assert planar.polygon_union_perimeter([SQUARE, SQUARE]) == pytest.approx(4.0)


def test_polygon_validation():
    with pytest.raises(ValueError):
        planar.check_convex_polygon(SQUARE[::-1])
    with pytest.raises(ValueError):
        planar.check_convex_polygon([[0, 0], [2, 0], [1, 0.2], [1, 2]])
    with pytest.raises(ValueError):
        planar.check_convex_polygon([[0, 0], [1, 0]])


def _random_convex(rng):
    k = int(rng.integers(3, 7))
    ang = np.sort(rng.uniform(0, 2 * math.pi, size=k))
    r = rng.uniform(0.3, 1.2)
    return np.stack([np.cos(ang), np.sin(ang)], axis=1) * r + rng.uniform(-1, 1, size=2)


def test_polygon_union_perimeter_against_shapely():
    shapely = pytest.importorskip("shapely")
    from shapely.ops import unary_union

    rng = np.random.default_rng(10)
    for _ in range(100):
        polys = []
        while len(polys) < int(rng.integers(1, 6)):
            p = _random_convex(rng)
            if planar.polygon_area(p) > 1e-3:
                polys.append(p)
        ref = unary_union([shapely.Polygon(p) for p in polys])
        assert planar.polygon_union_perimeter(polys) == pytest.approx(ref.length, rel=1e-9)


def test_convex_intersection_area_against_shapely():
    shapely = pytest.importorskip("shapely")

    rng = np.random.default_rng(11)
    for _ in range(100):
        a, b = _random_convex(rng), _random_convex(rng)
        if min(planar.polygon_area(a), planar.polygon_area(b)) < 1e-3:
            continue
        ref = shapely.Polygon(a).intersection(shapely.Polygon(b)).area
        assert planar.polygon_area(planar.convex_polygon_intersection([a, b])) == pytest.approx(ref, abs=1e-12)
