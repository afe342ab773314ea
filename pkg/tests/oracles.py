"""Reference computations that share no code with the package internals.

They only use a body's ``gauge`` and ``boundary_point`` queries, which are
checked separately against closed forms.
"""

import numpy as np
from scipy.optimize import brentq


def brute_force_chords(K2, v, resolution=100000, merge=1e-6):
    """Chords bisected by ``v`` from a dense angle scan polished by brentq."""
    v = np.asarray(v, dtype=float)

    def gamma(a):
        return K2.boundary_point(np.array([np.cos(a), np.sin(a)]))

    def F(a):
        return float(K2.gauge(2 * v - gamma(a))) - 1.0

    t = np.linspace(0.0, 2 * np.pi, resolution + 1)
    pts = K2.boundary_point(np.stack([np.cos(t), np.sin(t)], axis=1))
    vals = K2.gauge(2 * v - pts) - 1.0
    roots = []
    for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0):
        roots.append(brentq(F, t[i], t[i + 1], xtol=1e-15, rtol=1e-15))
    roots += list(t[:-1][vals[:-1] == 0])
    chords = []
    for a in roots:
        p1 = gamma(a)
        pair = (p1, 2 * v - p1)
        if all(pair_distance(pair, c) >= merge for c in chords):
            chords.append(pair)
    return chords


def pair_distance(a, b):
    """Unordered-pair distance written out directly."""
    (a1, a2), (b1, b2) = a, b
    n = np.linalg.norm
    return min(max(n(a1 - b1), n(a2 - b2)), max(n(a1 - b2), n(a2 - b1)))


def match_chords(found, reference):
    """Largest distance from each reference pair to its nearest found pair."""
    worst = 0.0
    for r in reference:
        worst = max(worst, min(pair_distance((c.p1, c.p2), r) for c in found))
    return worst


def random_smooth_body(rng):
    """Random lp ball (p in [1.5, 6]) or ellipse with semi-axes in [0.5, 2]."""
    from spherespan.body import Ellipsoid, LpBall

    if rng.random() < 0.5:
        return LpBall(float(rng.uniform(1.5, 6.0)), 2, radii=rng.uniform(0.5, 2.0, size=2))
    return Ellipsoid(rng.uniform(0.5, 2.0, size=2))


def winding_by_crossings(points):
    """Winding number about 0 as signed crossings of the positive x-axis."""
    a, b = points, np.roll(points, -1, axis=0)
    up = (a[:, 1] <= 0) & (b[:, 1] > 0)
    down = (a[:, 1] > 0) & (b[:, 1] <= 0)
    x_cross = a[:, 0] + (b[:, 0] - a[:, 0]) * (0 - a[:, 1]) / np.where(b[:, 1] != a[:, 1], b[:, 1] - a[:, 1], 1)
    right = x_cross > 0
    return int(np.sum(up & right) - np.sum(down & right))


def degree_by_solid_angle(domain, image, faces):
    """PL sphere degree as the total signed solid angle of image triangles over 4 pi.

    Uses the Van Oosterom-Strackee formula; orientation is taken from the
    domain triangles.
    """
    a, b, c = (image[faces[:, k]] for k in range(3))
    la, lb, lc = (np.linalg.norm(x, axis=1) for x in (a, b, c))
    num = np.einsum("ij,ij->i", a, np.cross(b, c))
    den = la * lb * lc + np.einsum("ij,ij->i", a, b) * lc + np.einsum("ij,ij->i", a, c) * lb \
        + np.einsum("ij,ij->i", b, c) * la
    omega = 2 * np.arctan2(num, den)
    da, db, dc = (domain[faces[:, k]] for k in range(3))
    orient = np.sign(np.einsum("ij,ij->i", da, np.cross(db, dc)))
    return float(np.sum(orient * omega) / (4 * np.pi))
