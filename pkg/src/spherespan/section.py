"""Chords bisected by a point, planar sections, and chord selections.

A chord here is a pair of boundary points ``(p1, p2)``; its midpoint is
computed, never stored.  For strictly convex planar bodies the chord
bisected by a nonzero point is unique and :func:`chord_map` returns it with
``(0, p1, p2)`` oriented counter-clockwise.
"""

import csv
from dataclasses import dataclass

import numpy as np

from ._roots import illinois
from .body import ConvexBody, _as_points, _support_by_sampling
from .errors import (
    ContinuumSuspected,
    DegenerateSection,
    DimensionMismatch,
    MidpointOutside,
    MidpointZero,
    MultipleStripChords,
    NoStripChord,
    NotStrictlyConvex,
    ZeroMidpoint,
)

MERGE_TOL = 1e-6
CHORD_TOL = 1e-8


@dataclass(frozen=True)
class Chord:
    p1: np.ndarray
    p2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p1", np.asarray(self.p1, dtype=float))
        object.__setattr__(self, "p2", np.asarray(self.p2, dtype=float))

    @property
    def midpoint(self):
        return (self.p1 + self.p2) / 2

    def swapped(self):
        return Chord(self.p2, self.p1)

    def to_json(self):
        return {"p1": self.p1.tolist(), "p2": self.p2.tolist()}

    @classmethod
    def from_json(cls, data):
        return cls(data["p1"], data["p2"])


def d_sym(a, b):
    """Distance between unordered pairs ``{a1, a2}`` and ``{b1, b2}``."""
    a1, a2 = (a.p1, a.p2) if isinstance(a, Chord) else a
    b1, b2 = (b.p1, b.p2) if isinstance(b, Chord) else b
    straight = max(np.linalg.norm(a1 - b1), np.linalg.norm(a2 - b2))
    crossed = max(np.linalg.norm(a1 - b2), np.linalg.norm(a2 - b1))
    return float(min(straight, crossed))


def d_sym_batch(a1, a2, b1, b2):
    """Vectorised :func:`d_sym` over broadcastable endpoint arrays."""
    n = np.linalg.norm
    straight = np.maximum(n(a1 - b1, axis=-1), n(a2 - b2, axis=-1))
    crossed = np.maximum(n(a1 - b2, axis=-1), n(a2 - b1, axis=-1))
    return np.minimum(straight, crossed)


def chord_errors(K, chord):
    """Largest deviation of the endpoints' gauges from 1."""
    return float(max(abs(K.gauge(chord.p1) - 1), abs(K.gauge(chord.p2) - 1)))


def write_chords_csv(path, chords):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        n = len(chords[0].p1) if chords else 2
        axes = "xyz"[:n]
        writer.writerow([f"p1_{a}" for a in axes] + [f"p2_{a}" for a in axes])
        for c in chords:
            writer.writerow([repr(float(x)) for x in np.concatenate([c.p1, c.p2])])


class PlanarSection(ConvexBody):
    """The 2D body ``K ∩ span{b1, b2}`` in the orthonormal frame ``(b1, b2)``."""

    kind = "section"

    def __init__(self, body, b1, b2):
        self.body = body
        self.basis = np.stack([np.asarray(b1, float), np.asarray(b2, float)])
        self.dim = 2
        self.strictly_convex = body.strictly_convex

    def lift(self, st):
        return np.asarray(st, dtype=float) @ self.basis

    def coords(self, x):
        return np.asarray(x, dtype=float) @ self.basis.T

    def gauge(self, st):
        return self.body.gauge(self.lift(_as_points(st, 2)))

    def support(self, u):
        u = _as_points(u, 2)
        if self.body.dim == 2:
            val, x = self.body.support(self.lift(u))
            return val, self.coords(x)
        return _support_by_sampling(self, u)

    def to_json(self):
        return {"kind": "section", "body": self.body.to_json(), "basis": self.basis.tolist()}


def make_section(K, v, q):
    """Section of ``K`` by ``span{v, q}`` with ``b1`` along ``q``."""
    v = _as_points(v, K.dim)
    q = _as_points(q, K.dim)
    vv, qq, vq = v @ v, q @ q, v @ q
    if qq == 0 or vv * qq - vq * vq <= 1e-12 * vv * qq:
        raise DegenerateSection("v and q are (nearly) linearly dependent")
    b1 = q / np.sqrt(qq)
    w = v - (v @ b1) * b1
    b2 = w / np.linalg.norm(w)
    return PlanarSection(K, b1, b2)


def _sweep(K2, resolution):
    """Boundary parametrisation by angle, cached per body and resolution."""
    cache = K2.__dict__.setdefault("_sweep_cache", {})
    if resolution not in cache:
        t = 2 * np.pi * np.arange(resolution) / resolution
        cache[resolution] = (t, K2.boundary_point(np.stack([np.cos(t), np.sin(t)], -1)))
    return cache[resolution]


def _find_chords(K2, v, resolution):
    """All chords of ``∂K2`` bisected by ``v``, merged up to endpoint swap.

    Roots of ``F(t) = gauge(2v - γ(t)) - 1`` are bracketed on the sampled
    boundary ``γ`` and polished by bisection in ``t``.
    """
    t, gam = _sweep(K2, resolution)
    F = K2.gauge(2 * v - gam) - 1
    Fn = np.roll(F, -1)
    zero = np.abs(F) <= 1e-14
    change = (F * Fn < 0) & ~zero & ~np.roll(zero, -1)
    roots = [t[zero]]
    if np.any(change):
        lo = t[change]
        hi = lo + 2 * np.pi / resolution

        def F_at(a):
            return K2.gauge(2 * v - K2.boundary_point(np.stack([np.cos(a), np.sin(a)], -1))) - 1

        roots.append(illinois(F_at, lo, hi, F[change], Fn[change], ftol=1e-15))
    roots = np.concatenate(roots)
    if len(roots) == 0:
        return []
    p1 = K2.boundary_point(np.stack([np.cos(roots), np.sin(roots)], -1))
    p2 = 2 * v - p1
    kept = []
    for i in range(len(roots)):
        if kept:
            k = np.array(kept)
            if np.min(d_sym_batch(p1[k], p2[k], p1[i], p2[i])) < MERGE_TOL:
                continue
        kept.append(i)
    return [Chord(p1[i], p2[i]) for i in kept]


def bisected_chords_2d(K2, v, resolution=4096):
    """Every chord of the planar body ``K2`` whose midpoint is ``v``.

    Raises :class:`ContinuumSuspected` when more than ``resolution / 10``
    distinct chords survive (a flat-face continuum); the chords found are
    attached to the exception.
    """
    if K2.dim != 2:
        raise DimensionMismatch("bisected_chords_2d needs a planar body")
    v = _as_points(v, 2)
    g = float(K2.gauge(v))
    if g == 0:
        raise MidpointZero("every line through 0 bisects a diameter")
    if g >= 1:
        raise MidpointOutside(f"midpoint has gauge {g} >= 1")
    chords = _find_chords(K2, v, resolution)
    if len(chords) > resolution / 10:
        raise ContinuumSuspected(f"{len(chords)} distinct chords at resolution {resolution}", chords)
    return chords


def _ray_exit(K2, x, d):
    """``s > 0`` with ``x + s d`` on the boundary, for interior ``x``."""
    gx = K2.gauge(x)
    hi = (1 + gx) / K2.gauge(d)

    def h(s):
        return K2.gauge(x + s[:, None] * d) - 1

    return illinois(h, np.zeros(len(x)), hi, gx - 1, h(hi))


def chord_map_batch(K2, points):
    """Vectorised :func:`chord_map`: returns endpoint arrays ``(P1, P2)``.

    For each ``p`` the bisecting direction is a bracketed root in the angle
    ``a`` of the imbalance ``exit(p, d(a)) - exit(p, -d(a))``, which
    changes sign between the radial direction and its opposite.
    """
    if K2.dim != 2:
        raise DimensionMismatch("chord_map needs a planar body")
    if not K2.strictly_convex:
        raise NotStrictlyConvex("chord_map needs a strictly convex body")
    P = np.atleast_2d(_as_points(points, 2))
    g = K2.gauge(P)
    if np.any(g == 0):
        raise ZeroMidpoint("no chord selection is possible at the origin")
    if np.any(g > 1 + 1e-9):
        raise MidpointOutside("midpoint outside the body")
    P1 = np.empty_like(P)
    P2 = np.empty_like(P)
    edge = g >= 1 - 1e-12
    if np.any(edge):
        P1[edge] = P2[edge] = P[edge] / g[edge, None]
    inner = ~edge
    if np.any(inner):
        x = P[inner]
        lo = np.arctan2(x[:, 1], x[:, 0])
        r = np.linalg.norm(x, axis=-1)

        def G(a):
            d = np.stack([np.cos(a), np.sin(a)], -1)
            return _ray_exit(K2, x, d) - _ray_exit(K2, x, -d)

        # the imbalance is -2|x| along x and +2|x| against it
        a = illinois(G, lo, lo + np.pi, -2 * r, 2 * r)
        d = np.stack([np.cos(a), np.sin(a)], -1)
        left = x + _ray_exit(K2, x, d)[:, None] * d
        # d points to the left of x, so (0, 2x - left, left) is counter-clockwise
        P1[inner] = 2 * x - left
        P2[inner] = left
    return P1, P2


def chord_map(K2, p):
    """The unique chord of a strictly convex planar body bisected by ``p``."""
    P1, P2 = chord_map_batch(K2, np.asarray(p, dtype=float)[None])
    return Chord(P1[0], P2[0])


def disk_chord_batch(Z):
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    r = np.linalg.norm(Z, axis=-1)
    if np.any(r == 0):
        raise ZeroMidpoint("no chord selection is possible at the origin")
    if np.any(r > 1 + 1e-12):
        raise MidpointOutside("midpoint outside the unit disk")
    h = np.sqrt(np.clip(1 - r * r, 0.0, None))
    rot = np.stack([-Z[:, 1], Z[:, 0]], -1) / r[:, None]
    return Z - h[:, None] * rot, Z + h[:, None] * rot


def disk_chord(z):
    """Closed-form chord of the Euclidean unit circle with midpoint ``z``."""
    P1, P2 = disk_chord_batch(np.asarray(z, dtype=float)[None])
    return Chord(P1[0], P2[0])


def signed_area(a, b):
    """Twice the signed area of the triangle ``(0, a, b)`` (planar)."""
    a = np.asarray(a)
    b = np.asarray(b)
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def strip_chord(K, v, q, phi, eps, resolution=2048):
    """Chord of the section ``K ∩ span{v, q}`` bisected by ``v`` inside the strip.

    The strip is ``{x : <phi, x> <= m + eps}`` with ``m = <phi, q>``.  The
    endpoint returned as ``p1`` is the one lying further on the far side of
    the line through ``q`` and ``-q`` from ``v`` (smaller second section
    coordinate); ``p2 = 2 v - p1``.
    """
    v = _as_points(v, K.dim)
    phi = np.asarray(phi, dtype=float)
    S = make_section(K, v, q)
    v2 = S.coords(v)
    phi2 = S.coords(phi)
    m = float(phi @ q)
    chords = _find_chords(S, v2, resolution)
    slack = m + eps + 1e-12 * max(1.0, abs(m))
    inside = [c for c in chords if max(phi2 @ c.p1, phi2 @ c.p2) <= slack]
    if not inside:
        raise NoStripChord(f"no chord bisected by {v.tolist()} lies in the strip")
    if len(inside) > 1:
        raise MultipleStripChords(f"{len(inside)} chords in the strip; shrink eps")
    c = inside[0]
    far = c.p1 if c.p1[1] <= c.p2[1] else c.p2
    p1 = S.lift(far)
    return Chord(p1, 2 * v - p1)


def section_off_line(K, q):
    """Chord selection on ``K`` minus the line through ``q``.

    Returns a callable ``v -> Chord``: the chord of the (strictly convex)
    section ``K ∩ span{v, q}`` bisected by ``v``, oriented counter-clockwise
    in the section's stored frame.
    """
    q = _as_points(q, K.dim)
    if not K.strictly_convex:
        raise NotStrictlyConvex("sections of a strictly convex body are needed")

    def select(v):
        v = _as_points(v, K.dim)
        S = make_section(K, v, q)
        P1, _ = chord_map_batch(S, S.coords(v)[None])
        p1 = S.lift(P1[0])
        return Chord(p1, 2 * v - p1)

    return select
