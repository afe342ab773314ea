import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from spherespan import body as B
from spherespan import section as S
from spherespan.errors import (
    ContinuumSuspected,
    DegenerateSection,
    MidpointOutside,
    MidpointZero,
    NotStrictlyConvex,
    ZeroMidpoint,
)

from oracles import brute_force_chords, match_chords, random_smooth_body

SQ3 = np.sqrt(0.75)


def _assert_chord(K, c, v, tol=1e-9):
    assert S.chord_errors(K, c) <= tol
    np.testing.assert_allclose(c.midpoint, v, atol=1e-12)


def test_make_section_examples():
    sec = S.make_section(B.ball3(), [0, 0.5, 0], [1, 0, 0])
    np.testing.assert_allclose(sec.basis, [[1, 0, 0], [0, 1, 0]], atol=1e-15)
    x = np.random.default_rng(0).normal(size=(1000, 2))
    np.testing.assert_allclose(sec.gauge(x), np.linalg.norm(x, axis=1), atol=1e-12)
    with pytest.raises(DegenerateSection):
        S.make_section(B.ball3(), [2, 0, 0], [1, 0, 0])


@pytest.mark.parametrize("K", [B.ball3(), B.LpBall(3, 3), B.Ellipsoid([1, 2, 0.5])], ids=["ball", "l3", "ellipsoid"])
def test_section_gauge_consistency(K):
    rng = np.random.default_rng(1)
    sec = S.make_section(K, rng.normal(size=3), rng.normal(size=3))
    np.testing.assert_allclose(sec.basis @ sec.basis.T, np.eye(2), atol=1e-14)
    st_ = rng.normal(size=(1000, 2))
    ambient = st_[:, :1] * sec.basis[0] + st_[:, 1:] * sec.basis[1]
    assert np.max(np.abs(sec.gauge(st_) - K.gauge(ambient))) <= 1e-12


def test_bisected_chords_examples():
    (c,) = S.bisected_chords_2d(B.disk(), [0.5, 0])
    assert sorted([c.p1[1], c.p2[1]]) == pytest.approx([-SQ3, SQ3], abs=1e-12)
    np.testing.assert_allclose([c.p1[0], c.p2[0]], 0.5, atol=1e-12)
    (c,) = S.bisected_chords_2d(B.Ellipsoid([2, 1]), [0, 0.5])
    assert sorted([c.p1[0], c.p2[0]]) == pytest.approx([-np.sqrt(3), np.sqrt(3)], abs=1e-12)
    with pytest.raises(ContinuumSuspected) as info:
        S.bisected_chords_2d(B.square(), [0.5, 0])
    # every reported chord is a genuine member of the continuum (s,1),(1-s,-1)
    assert len(info.value.chords) > 4096 / 10
    for c in info.value.chords:
        _assert_chord(B.square(), c, [0.5, 0])


def test_bisected_chords_rejects_bad_midpoints():
    with pytest.raises(MidpointZero):
        S.bisected_chords_2d(B.disk(), [0, 0])
    with pytest.raises(MidpointOutside):
        S.bisected_chords_2d(B.disk(), [1.0, 0.5])


@pytest.mark.parametrize("seed", range(3))
def test_bisected_chords_match_brute_force(seed):
    rng = np.random.default_rng(100 + seed)
    K = random_smooth_body(rng)
    for v in K.random_points(rng, 10):
        found = S.bisected_chords_2d(K, v, 10000)
        ref = brute_force_chords(K, v)
        assert len(found) == len(ref)
        assert match_chords(found, ref) <= 1e-6
        for c in found:
            _assert_chord(K, c, v)


def test_hexagon_chords_have_unit_gauge():
    # a polygon midpoint away from the centre region has finitely many chords
    K = B.hexagon()
    v = np.array([0.6, 0.1])
    chords = S.bisected_chords_2d(K, v)
    assert chords
    for c in chords:
        _assert_chord(K, c, v)


def test_disk_chords_are_perpendicular():
    K = B.disk()
    rng = np.random.default_rng(2)
    for v in K.random_points(rng, 1000):
        for c in S.bisected_chords_2d(K, v, 1024):
            assert abs((c.p1 - c.p2) @ v) <= 1e-8


def test_chord_map_examples():
    c = S.chord_map(B.disk(), [0.5, 0])
    assert {tuple(np.round(c.p1, 12)), tuple(np.round(c.p2, 12))} == {(0.5, round(SQ3, 12)), (0.5, -round(SQ3, 12))}
    # counter-clockwise: (0, p1, p2) has positive orientation
    assert S.signed_area(c.p1, c.p2) > 0
    with pytest.raises(ZeroMidpoint):
        S.chord_map(B.disk(), [0, 0])
    with pytest.raises(NotStrictlyConvex):
        S.chord_map(B.square(), [0.5, 0])


def test_chord_map_unique_in_l4():
    K = B.LpBall(4, 2)
    rng = np.random.default_rng(3)
    pts = K.random_points(rng, 1000)
    P1, P2 = S.chord_map_batch(K, pts)
    for v, a, b in zip(pts, P1, P2):
        chords = S.bisected_chords_2d(K, v, 1024)
        assert len(chords) == 1
        assert S.d_sym(chords[0], (a, b)) <= 1e-9
        assert S.signed_area(a, b) > -1e-12


def test_disk_chord_examples():
    c = S.disk_chord([0.5, 0])
    np.testing.assert_allclose([c.p1, c.p2], [[0.5, -SQ3], [0.5, SQ3]], atol=1e-15)
    c = S.disk_chord([0, 1])
    np.testing.assert_array_equal(c.p1, [0, 1])
    np.testing.assert_array_equal(c.p2, [0, 1])


def test_disk_chord_agrees_with_chord_map():
    rng = np.random.default_rng(4)
    Z = B.disk().random_points(rng, 1000)
    D1, D2 = S.disk_chord_batch(Z)
    C1, C2 = S.chord_map_batch(B.disk(), Z)
    assert np.max(np.abs(D1 - C1)) <= 1e-10
    assert np.max(np.abs(D2 - C2)) <= 1e-10


def test_strip_chord_disk_cap():
    K = B.disk()
    q, phi = np.array([0.0, -1.0]), np.array([0.0, 1.0])
    v = np.array([0.05, -0.9])
    c = S.strip_chord(K, v, q, phi, eps=0.5)
    _assert_chord(K, c, v)
    # both endpoints in the lower cap {y <= -1 + eps}
    assert max(c.p1[1], c.p2[1]) <= -0.5
    # closed form: the disk chord of v
    assert S.d_sym(c, S.disk_chord(v)) <= 1e-12


def test_strip_chord_endpoints_converge_to_q():
    K = B.disk()
    q, phi = np.array([0.0, -1.0]), np.array([0.0, 1.0])
    spread = []
    for eps in (0.4, 0.1, 0.025, 0.00625):
        v = q * (1 - eps / 4) + np.array([eps / 8, 0])
        c = S.strip_chord(K, v, q, phi, eps)
        spread.append(max(np.linalg.norm(c.p1 - q), np.linalg.norm(c.p2 - q)))
    assert all(a > b for a, b in zip(spread, spread[1:]))
    assert spread[-1] < 0.2


def test_strip_chord_on_span_q_is_degenerate():
    with pytest.raises(DegenerateSection):
        S.strip_chord(B.disk(), [0, -0.5], [0, -1], [0, 1], 0.5)


def test_section_off_line_examples():
    sel = S.section_off_line(B.ball3(), [0, 0, 1])
    c = sel([0.5, 0, 0])
    got = sorted([tuple(np.round(c.p1, 12)), tuple(np.round(c.p2, 12))])
    assert got == [(0.5, 0, -round(SQ3, 12)), (0.5, 0, round(SQ3, 12))]
    with pytest.raises(DegenerateSection):
        sel([0, 0, 0.5])


def test_section_off_line_continuity_along_loop():
    sel = S.section_off_line(B.LpBall(3, 3), [0, 0, 1])
    moduli = []
    for n in (50, 100, 200):
        t = np.linspace(0, 2 * np.pi, n + 1)
        loop = np.stack([0.3 * np.cos(t), 0.3 * np.sin(t), 0.2 * np.sin(2 * t)], axis=1)
        chords = [sel(v) for v in loop]
        moduli.append(max(S.d_sym(a, b) for a, b in zip(chords, chords[1:])))
    assert np.isfinite(moduli).all()
    # a continuous selection: the modulus shrinks with the step
    assert moduli[2] < moduli[1] < moduli[0]


def test_chords_csv(tmp_path):
    path = tmp_path / "chords.csv"
    S.write_chords_csv(path, S.bisected_chords_2d(B.disk(), [0.5, 0]))
    lines = path.read_text().splitlines()
    assert lines[0] == "p1_x,p1_y,p2_x,p2_y"
    assert len(lines) == 2


def test_chord_json_roundtrip():
    c = S.Chord([0.1, 0.2], [0.3, -0.4])
    c2 = S.Chord.from_json(c.to_json())
    np.testing.assert_array_equal(c2.p1, c.p1)
    np.testing.assert_array_equal(c2.swapped().p1, c.p2)


def test_d_sym_is_a_metric():
    rng = np.random.default_rng(5)
    pairs = rng.normal(size=(1000, 3, 2, 2))
    for a, b, c in pairs:
        assert S.d_sym(a, b) + S.d_sym(b, c) - S.d_sym(a, c) >= -1e-12
        assert S.d_sym(a, b) == pytest.approx(S.d_sym(b, a), abs=0)
        assert S.d_sym(a, a[::-1]) == 0


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(0, 2 * np.pi))
def test_disk_chord_midpoint_and_radius(r, a):
    z = r * np.array([np.cos(a), np.sin(a)])
    c = S.disk_chord(z)
    np.testing.assert_allclose(c.midpoint, z, atol=1e-15)
    np.testing.assert_allclose(np.linalg.norm([c.p1, c.p2], axis=1), 1, atol=1e-14)
