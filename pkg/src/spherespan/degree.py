"""Degrees of sampled self-maps of a body's boundary.

In the plane the degree is a winding number, accumulated from wrapped angle
increments of the images.  In space the map is piecewise linear on a
triangulated sphere and the degree is a signed count of image triangles
pierced by a ray.
"""

import math

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .body import Polytope, disk, radial_transport
from .errors import (
    BadTriangulation,
    NonRegularValue,
    SamplingTooCoarse,
    VerticesNotFixed,
    ZeroImage,
)
from .maps import SphereMapSamples

MAX_STEP = np.pi / 2
ROUND_TOL = 0.01
RAY_TOL = 1e-9


def _loop_turns(points, max_step):
    """Total signed angle swept by a closed planar loop, in turns."""
    ang = np.arctan2(points[:, 1], points[:, 0])
    step = np.diff(np.append(ang, ang[0]))
    step = (step + np.pi) % (2 * np.pi) - np.pi
    if np.max(np.abs(step)) >= max_step:
        raise SamplingTooCoarse(
            f"consecutive samples {np.max(np.abs(step)):.3f} rad apart (limit {max_step:.3f})")
    turns = step.sum() / (2 * np.pi)
    k = round(turns)
    if abs(turns - k) > ROUND_TOL:
        raise SamplingTooCoarse(f"winding residual {abs(turns - k):.3g} exceeds {ROUND_TOL}")
    return int(k)


def winding_number(f):
    """Degree of a sampled planar boundary self-map.

    The images' winding is divided by the domain loop's own winding (which
    must be +-1), so clockwise-ordered domains are handled.
    """
    if f.dim != 2:
        raise ValueError("winding_number is for planar maps; use pl_degree in space")
    if np.any(np.linalg.norm(f.image, axis=-1) == 0):
        raise ZeroImage("an image sample is the origin")
    dom = _loop_turns(f.domain, np.pi)
    if abs(dom) != 1:
        raise SamplingTooCoarse(f"domain loop winds {dom} times around the origin")
    return _loop_turns(f.image, MAX_STEP) * dom


# ---------------------------------------------------------------- 3D


def icosphere(subdivisions=2):
    """Unit icosphere: ``(vertices, faces)`` with outward-oriented faces."""
    t = (1 + math.sqrt(5)) / 2
    v = [(-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
         (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
         (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1)]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
             (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
             (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
             (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    verts = [np.array(x, dtype=float) / np.linalg.norm(x) for x in v]
    for _ in range(subdivisions):
        cache = {}

        def mid(a, b):
            key = (min(a, b), max(a, b))
            if key not in cache:
                m = verts[a] + verts[b]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        new = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new
    return np.array(verts), np.array(faces, dtype=int)


def check_triangulation(n_vertices, faces):
    """Raise :class:`BadTriangulation` unless ``faces`` is a closed oriented sphere."""
    faces = np.asarray(faces)
    if faces.ndim != 2 or faces.shape[1] != 3:
        raise BadTriangulation("faces must be index triples")
    directed = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    undirected = np.sort(directed, axis=1)
    uniq, counts = np.unique(undirected, axis=0, return_counts=True)
    if np.any(counts != 2):
        raise BadTriangulation("every edge must bound exactly two faces")
    if len(np.unique(directed, axis=0)) != len(directed):
        raise BadTriangulation("faces are not coherently oriented")
    used = len(np.unique(faces))
    chi = used - len(uniq) + len(faces)
    if chi != 2 or used != n_vertices:
        raise BadTriangulation(f"Euler characteristic {chi}, expected 2")


def _crossing_count(domain, image, faces, y):
    """Signed count of image triangles whose cone contains the ray through ``y``."""
    A, B, C = (image[faces[:, k]] for k in range(3))
    M = np.stack([A, B, C], axis=-1)
    det = np.linalg.det(M)
    scale = np.prod(np.linalg.norm(M, axis=1), axis=-1)
    flat = np.abs(det) <= 1e-14 * scale
    y = y / np.linalg.norm(y)
    if np.any(flat):
        # a flat image triangle is missed unless the ray grazes its plane
        Mf = M[flat]
        span_normal = np.cross(Mf[:, :, 0], Mf[:, :, 1]) + np.cross(Mf[:, :, 1], Mf[:, :, 2])
        nn = np.linalg.norm(span_normal, axis=-1)
        graze = (nn > 0) & (np.abs(span_normal @ y) <= RAY_TOL * nn)
        # images on one line through the origin span only a ray (or a line)
        a = Mf[:, :, 0] + Mf[:, :, 1] + Mf[:, :, 2]
        an = np.linalg.norm(np.where(nn[:, None] > 0, 0, a), axis=-1)
        along = (nn == 0) & (an > 0) & (np.linalg.norm(np.cross(a, y), axis=-1) <= RAY_TOL * np.maximum(an, 1e-300))
        graze |= along | ((nn == 0) & (an == 0))
        if np.any(graze):
            raise NonRegularValue("ray lies in the plane of a degenerate image triangle")
    live = ~flat
    coef = np.linalg.solve(M[live], np.broadcast_to(y, (live.sum(), 3))[..., None])[..., 0]
    total = coef.sum(axis=-1)
    # only the forward ray counts, so the cone coordinates must share the sign of the sum
    norm = coef / np.where(total == 0, 1, total)[:, None]
    forward = total > 0
    near = forward & (norm.min(axis=-1) > -RAY_TOL) & (np.abs(norm).min(axis=-1) <= RAY_TOL)
    if np.any(near):
        raise NonRegularValue("ray passes within tolerance of an image edge")
    hit = forward & (norm.min(axis=-1) > 0)
    dom = np.linalg.det(np.stack([domain[faces[:, k]] for k in range(3)], axis=-1))[live]
    return int(np.sum(np.sign(det[live][hit]) * np.sign(dom[hit])))


def pl_degree(f, regular_value=None, seed=0, checks=8, attempts=16):
    """Degree of a piecewise-linear self-map of a triangulated sphere.

    The count is repeated at ``checks`` further random values and must not
    change.  Non-regular values are replaced by random perturbations, up to
    ``attempts`` tries.
    """
    if f.faces is None or f.dim != 3:
        raise ValueError("pl_degree needs a triangulated map in R^3")
    check_triangulation(len(f.domain), f.faces)
    if np.any(np.linalg.norm(f.image, axis=-1) == 0):
        raise ZeroImage("an image vertex is the origin")
    rng = np.random.default_rng(seed)

    def count(y):
        for _ in range(attempts):
            try:
                return _crossing_count(f.domain, f.image, f.faces, y)
            except NonRegularValue:
                y = y / np.linalg.norm(y) + 1e-3 * rng.normal(size=3)
        raise NonRegularValue(f"no regular value found in {attempts} attempts")

    y0 = rng.normal(size=3) if regular_value is None else np.asarray(regular_value, dtype=float)
    deg = count(y0)
    for _ in range(checks):
        other = count(rng.normal(size=3))
        if other != deg:
            raise BadTriangulation(f"degree depends on the regular value ({deg} vs {other})")
    return deg


def degree(f, **kwargs):
    """Winding number in the plane, PL degree in space."""
    return winding_number(f) if f.dim == 2 else pl_degree(f, **kwargs)


# ---------------------------------------------------------------- vertex-fixing maps


def random_polygon(rng, max_vertices=12, min_vertices=4):
    """Random origin-symmetric convex polygon with at most ``max_vertices`` vertices."""
    while True:
        k = rng.integers(min_vertices // 2, max_vertices // 2 + 1)
        ang = np.sort(rng.uniform(0, np.pi, size=k))
        r = rng.uniform(0.5, 1.5, size=k)
        half = np.stack([r * np.cos(ang), r * np.sin(ang)], -1)
        pts = np.vstack([half, -half])
        try:
            hull = ConvexHull(pts)
        except QhullError:
            continue
        P = Polytope(pts[np.sort(hull.vertices)], check_extreme=False)
        if len(P.vertices) >= min_vertices:
            return P


def _ccw_vertices(P):
    v = P.vertices
    order = np.argsort(np.arctan2(v[:, 1], v[:, 0]))
    return v[order]


def vertex_fixing_map(P, rng=None, samples_per_edge=32, excursion_wraps=0, wrap_edge=0,
                      monotone=False):
    """Sampled self-map of ``∂P`` fixing every vertex.

    On each edge the image angle runs from one vertex to the next along a
    random reparametrisation (monotone or not), so each edge image is
    homotopic to the edge relative to its endpoints.  ``excursion_wraps``
    adds, on edge ``wrap_edge``, a detour that winds that many times around
    the origin and comes back.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    V = _ccw_vertices(P)
    k = len(V)
    theta = np.unwrap(np.arctan2(V[:, 1], V[:, 0]))
    theta = np.append(theta, theta[0] + 2 * np.pi)
    dom, img = [], []
    for i in range(k):
        span = theta[i + 1] - theta[i]
        n = samples_per_edge
        wraps = excursion_wraps if i == wrap_edge else 0
        n = max(n, int(math.ceil((span + 4 * np.pi * abs(wraps)) / (np.pi / 8))))
        s = np.arange(n) / n
        # random piecewise-linear reparametrisation fixing 0 and 1
        knots = np.sort(rng.uniform(size=3)) if monotone else rng.uniform(-0.3, 1.3, size=3)
        h = np.interp(s, [0, 0.25, 0.5, 0.75, 1], np.concatenate([[0], knots, [1]]))
        excursion = 2 * np.pi * wraps * (1 - np.abs(2 * s - 1))
        phi = theta[i] + span * h + excursion
        a, b = V[i], V[(i + 1) % k]
        dom.append(a + s[:, None] * (b - a))
        image = P.boundary_point(np.stack([np.cos(phi), np.sin(phi)], -1))
        image[0] = a
        img.append(image)
    return SphereMapSamples(np.vstack(dom), np.vstack(img))


def long_way_map(P, edge=0, samples_per_edge=64):
    """Vertex-fixing map whose ``edge`` runs the long way round: degree 0.

    Fixing the vertices alone therefore does not force degree one in the
    plane; the edge images must also stay in the edge's homotopy class.
    """
    V = _ccw_vertices(P)
    k = len(V)
    theta = np.unwrap(np.arctan2(V[:, 1], V[:, 0]))
    theta = np.append(theta, theta[0] + 2 * np.pi)
    dom, img = [], []
    for i in range(k):
        span = theta[i + 1] - theta[i]
        if i == edge:
            span -= 2 * np.pi
        n = max(samples_per_edge, int(math.ceil(abs(span) / (np.pi / 8))))
        s = np.arange(n) / n
        phi = theta[i] + span * s
        a, b = V[i], V[(i + 1) % k]
        dom.append(a + s[:, None] * (b - a))
        image = P.boundary_point(np.stack([np.cos(phi), np.sin(phi)], -1))
        image[0] = a
        img.append(image)
    return SphereMapSamples(np.vstack(dom), np.vstack(img))


def fix_extreme_degree_check(P, f, tol=0.0):
    """Check that ``f`` fixes the vertices of ``P`` and compute its degree.

    The map is transported radially to the unit circle first.  Returns a
    report with ``degree`` and ``holds`` (degree equals one).
    """
    fixed = 0
    for v in P.vertices:
        hits = np.flatnonzero(np.all(np.abs(f.domain - v) <= tol, axis=-1))
        if len(hits) == 0:
            raise VerticesNotFixed(f"vertex {v.tolist()} is not a domain sample")
        if np.max(np.abs(f.image[hits] - v)) > tol:
            raise VerticesNotFixed(f"vertex {v.tolist()} is moved")
        fixed += 1
    g = radial_transport(P, disk(), f)
    d = winding_number(g)
    return {
        "degree": d,
        "holds": d == 1,
        "vertices_fixed": fixed,
        "samples": len(f.domain),
        "max_angular_step": g.max_angular_step(),
    }


def interpolate_maps(f, g, steps=20):
    """Windings along the straight-line homotopy ``(1-s) f + s g``, renormalised.

    Returns the list of windings, or ``None`` for a step where some
    intermediate value vanishes.
    """
    out = []
    for s in np.linspace(0, 1, steps + 1):
        h = (1 - s) * f.image + s * g.image
        if np.any(np.linalg.norm(h, axis=-1) < 1e-12):
            out.append(None)
            continue
        out.append(winding_number(SphereMapSamples(f.domain, h / np.linalg.norm(h, axis=-1)[:, None])))
    return out


def angle_map(k, count=720, phase=0.0):
    """``theta -> k theta + phase`` on the unit circle, sampled at ``count`` angles."""
    t = 2 * np.pi * np.arange(count) / count
    dom = np.stack([np.cos(t), np.sin(t)], -1)
    img = np.stack([np.cos(k * t + phase), np.sin(k * t + phase)], -1)
    return SphereMapSamples(dom, img)


__all__ = [
    "angle_map", "check_triangulation", "degree", "fix_extreme_degree_check", "icosphere",
    "interpolate_maps", "long_way_map", "pl_degree", "random_polygon", "vertex_fixing_map",
    "winding_number",
]
