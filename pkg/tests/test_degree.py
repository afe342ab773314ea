import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from spherespan import body as B
from spherespan import degree as G
from spherespan.errors import BadTriangulation, SamplingTooCoarse, VerticesNotFixed, ZeroImage
from spherespan.maps import SphereMapSamples

from oracles import degree_by_solid_angle, winding_by_crossings


def random_circle_map(rng, count=720, knots=8):
    """Random piecewise-linear angle function with an integer total turn."""
    turns = int(rng.integers(-3, 4))
    s = np.linspace(0, 1, knots + 1)
    a = np.concatenate([[0], rng.uniform(-2, 2, size=knots - 1), [0]]) + 2 * np.pi * turns * s
    t = np.arange(count) / count
    phi = np.interp(t, s, a) + rng.uniform(0, 2 * np.pi)
    dom = np.stack([np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)], axis=1)
    return SphereMapSamples(dom, np.stack([np.cos(phi), np.sin(phi)], axis=1)), turns


def test_winding_examples():
    assert G.winding_number(G.angle_map(1, 360)) == 1
    assert G.winding_number(G.angle_map(2, 360)) == 2
    dom = G.angle_map(1, 360).domain
    assert G.winding_number(SphereMapSamples(dom, np.tile([0.3, -0.2], (360, 1)))) == 0
    assert G.winding_number(G.angle_map(-2, 360)) == -2


def test_winding_matches_crossing_oracle():
    rng = np.random.default_rng(0)
    for _ in range(50):
        f, turns = random_circle_map(rng)
        assert G.winding_number(f) == winding_by_crossings(f.image) == turns


def test_winding_clockwise_domain():
    f = G.angle_map(2, 360)
    g = SphereMapSamples(f.domain[::-1], f.image[::-1])
    assert G.winding_number(g) == 2


def test_winding_rejects_coarse_and_zero():
    with pytest.raises(SamplingTooCoarse):
        G.winding_number(G.angle_map(3, 8))
    f = G.angle_map(1, 16)
    img = f.image.copy()
    img[3] = 0
    with pytest.raises(ZeroImage):
        G.winding_number(SphereMapSamples(f.domain, img))


@pytest.mark.parametrize("k", range(-2, 3))
@pytest.mark.parametrize("l", range(-2, 3))
def test_winding_multiplicative(k, l):
    g = G.angle_map(l, 720)
    # compose f(theta) = k theta with g by evaluating f at g's image angles
    ga = np.arctan2(g.image[:, 1], g.image[:, 0])
    fg = SphereMapSamples(g.domain, np.stack([np.cos(k * ga), np.sin(k * ga)], axis=1))
    assert G.winding_number(fg) == G.winding_number(G.angle_map(k)) * G.winding_number(g) == k * l


def test_homotopy_invariance():
    rng = np.random.default_rng(1)
    for _ in range(10):
        f, _ = random_circle_map(rng)
        # a perturbation that keeps every value within 90 degrees of f
        ang = rng.uniform(-1.2, 1.2) * np.sin(2 * np.pi * np.arange(720) / 720 * rng.integers(1, 4))
        c, s = np.cos(ang), np.sin(ang)
        g = SphereMapSamples(f.domain, np.stack([c * f.image[:, 0] - s * f.image[:, 1],
                                                 s * f.image[:, 0] + c * f.image[:, 1]], axis=1))
        w = G.interpolate_maps(f, g, steps=20)
        assert None not in w
        assert len(set(w)) == 1


def test_homotopy_through_zero_is_flagged():
    w = G.interpolate_maps(G.angle_map(1, 360), G.angle_map(1, 360, phase=np.pi), steps=20)
    assert w[10] is None
    assert w[0] == w[-1] == 1


@pytest.mark.parametrize("target", [B.square(), B.hexagon(), B.Ellipsoid([2, 1])], ids=["square", "hexagon", "ellipse"])
def test_transport_invariance(target):
    rng = np.random.default_rng(2)
    for _ in range(50):
        f, turns = random_circle_map(rng)
        g = B.radial_transport(B.disk(), target, f)
        assert G.winding_number(g) == G.winding_number(f) == turns


def test_icosphere_shape():
    V, F = G.icosphere(2)
    assert V.shape == (162, 3) and F.shape == (320, 3)
    np.testing.assert_allclose(np.linalg.norm(V, axis=1), 1, atol=1e-15)
    G.check_triangulation(len(V), F)


def test_pl_degree_examples():
    V, F = G.icosphere(2)
    assert G.pl_degree(SphereMapSamples(V, V, F)) == 1
    assert G.pl_degree(SphereMapSamples(V, -V, F)) == -1
    assert G.pl_degree(SphereMapSamples(V, np.tile([0.2, 0.3, 0.9], (len(V), 1)), F)) == 0


def test_pl_degree_matches_solid_angle_oracle():
    V, F = G.icosphere(2)
    rng = np.random.default_rng(3)
    for _ in range(10):
        Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        img = V @ Q.T
        # rotations keep degree 1, reflections give -1
        d = G.pl_degree(SphereMapSamples(V, img, F), seed=int(rng.integers(1000)))
        assert d == round(np.linalg.det(Q))
        assert d == pytest.approx(degree_by_solid_angle(V, img, F), abs=1e-9)


def test_pl_degree_two():
    # (theta, z) -> (2 theta, z) on the sphere wraps twice around the axis
    V, F = G.icosphere(3)
    r = np.hypot(V[:, 0], V[:, 1])
    a = 2 * np.arctan2(V[:, 1], V[:, 0])
    img = np.stack([r * np.cos(a), r * np.sin(a), V[:, 2]], axis=1)
    oracle = degree_by_solid_angle(V, img, F)
    # the coarse PL map misses some area near the poles; the integer is still clear
    assert round(oracle) == 2
    assert G.pl_degree(SphereMapSamples(V, img, F), regular_value=[1, 0.3, 0.1]) == 2


def test_pl_degree_regular_value_independence():
    V, F = G.icosphere(2)
    rng = np.random.default_rng(4)
    img = V + 0.3 * rng.normal(size=V.shape)
    d = G.pl_degree(SphereMapSamples(V, img, F))
    for y in rng.normal(size=(8, 3)):
        assert G.pl_degree(SphereMapSamples(V, img, F), regular_value=y, checks=0) == d


def test_bad_triangulation():
    V, F = G.icosphere(1)
    with pytest.raises(BadTriangulation):
        G.check_triangulation(len(V), F[:-1])
    flipped = F.copy()
    flipped[0] = flipped[0][::-1]
    with pytest.raises(BadTriangulation):
        G.check_triangulation(len(V), flipped)


def test_fix_extreme_identity_square():
    P = B.Polytope([[1, 1], [-1, 1], [-1, -1], [1, -1]])
    t = np.linspace(0, 1, 32, endpoint=False)[:, None]
    V = G._ccw_vertices(P)
    dom = np.vstack([V[i] + t * (V[(i + 1) % 4] - V[i]) for i in range(4)])
    rep = G.fix_extreme_degree_check(P, SphereMapSamples(dom, dom))
    assert rep["degree"] == 1 and rep["holds"] and rep["vertices_fixed"] == 4


def test_fix_extreme_monotone_hexagon():
    P = B.polytope_approx(B.disk(), 6)
    rng = np.random.default_rng(5)
    for _ in range(100):
        f = G.vertex_fixing_map(P, rng, monotone=True)
        assert G.fix_extreme_degree_check(P, f)["degree"] == 1


@pytest.mark.parametrize("wraps", [1, 2, -3])
def test_fix_extreme_with_excursion(wraps):
    P = B.polytope_approx(B.disk(), 6)
    f = G.vertex_fixing_map(P, np.random.default_rng(6), excursion_wraps=wraps, wrap_edge=2)
    rep = G.fix_extreme_degree_check(P, f)
    assert rep["degree"] == 1
    assert rep["max_angular_step"] < np.pi / 2


def test_vertex_fixing_alone_allows_degree_zero():
    # in the plane an edge may run the long way round while every vertex is fixed
    P = B.Polytope([[1, 1], [-1, 1], [-1, -1], [1, -1]])
    f = G.long_way_map(P)
    rep = G.fix_extreme_degree_check(P, f)
    assert rep["vertices_fixed"] == 4
    assert rep["degree"] == 0 and not rep["holds"]


def test_moved_vertex_is_reported():
    P = B.polytope_approx(B.disk(), 6)
    f = G.vertex_fixing_map(P, np.random.default_rng(7))
    img = f.image.copy()
    img[0] = P.boundary_point(img[0] + [0.0, 0.1])
    with pytest.raises(VerticesNotFixed):
        G.fix_extreme_degree_check(P, SphereMapSamples(f.domain, img))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_random_polygon_vertex_fixing_degree_one(seed):
    rng = np.random.default_rng(seed)
    P = G.random_polygon(rng)
    assert 4 <= len(P.vertices) <= 12
    f = G.vertex_fixing_map(P, rng)
    assert G.fix_extreme_degree_check(P, f)["degree"] == 1
    assert winding_by_crossings(B.radial_transport(P, B.disk(), f).image) == 1
