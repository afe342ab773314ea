"""Origin-symmetric convex bodies described by oracles.

Everything downstream needs only three queries of a body ``K``: its gauge
(the norm having ``K`` as unit ball), its support function, and the boundary
point along a ray.  Closed forms are used for lp balls, ellipsoids and
polytopes; :class:`MembershipBody` falls back on bisection along rays.

All vector arguments may be batched: arrays of shape ``(..., n)`` are
mapped to results of shape ``(...)`` (or ``(..., n)``).
"""

from functools import cached_property

import numpy as np
from scipy.optimize import linprog, minimize, minimize_scalar
from scipy.spatial import ConvexHull

from .errors import (
    DimensionMismatch,
    InvalidBody,
    NonExposedDirection,
    NonFiniteInput,
    OracleInconsistent,
    TooFewVertices,
    ZeroVector,
)
from .maps import SphereMapSamples

GAUGE_TOL = 1e-10


def _as_points(x, dim):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != dim:
        raise DimensionMismatch(f"expected vectors of dimension {dim}, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("vector has non-finite entries")
    return x


def unit_directions(dim, count, offset=0.0):
    """Evenly spread unit vectors: equal angles in 2D, a Fibonacci sphere in 3D."""
    if dim == 2:
        t = offset + 2 * np.pi * np.arange(count) / count
        return np.stack([np.cos(t), np.sin(t)], axis=-1)
    if dim == 3:
        return fibonacci_sphere(count)
    raise DimensionMismatch("only dimensions 2 and 3 are supported")


def fibonacci_sphere(count):
    i = np.arange(count) + 0.5
    z = 1 - 2 * i / count
    r = np.sqrt(np.clip(1 - z * z, 0.0, None))
    phi = np.pi * (3 - np.sqrt(5)) * i
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)


class ConvexBody:
    """Base class: a compact convex body with the origin in its interior.

    Subclasses implement :meth:`gauge` and :meth:`support`.
    """

    dim = 2
    strictly_convex = False
    vertices = None
    kind = "body"

    def gauge(self, x):
        raise NotImplementedError

    def support(self, u):
        """Return ``(max <u, x> over K, a maximiser)``."""
        raise NotImplementedError

    def contains(self, x, tol=1e-12):
        return self.gauge(x) <= 1 + tol

    def boundary_point(self, u):
        """Radial retraction ``u / gauge(u)`` onto the boundary."""
        u = _as_points(u, self.dim)
        g = self.gauge(u)
        if np.any(g == 0):
            raise ZeroVector("boundary_point needs a nonzero direction")
        return u / np.asarray(g)[..., None]

    def boundary_samples(self, count, offset=0.0):
        return self.boundary_point(unit_directions(self.dim, count, offset))

    def random_points(self, rng, count):
        """Random points of ``K`` (radial profile uniform in volume)."""
        d = rng.normal(size=(count, self.dim))
        r = rng.uniform(size=count) ** (1.0 / self.dim)
        return self.boundary_point(d) * r[:, None]

    @cached_property
    def outradius(self):
        """Largest Euclidean norm of a point of ``K``."""
        pts = self.boundary_samples(4096 if self.dim == 2 else 8192)
        return float(np.max(np.linalg.norm(pts, axis=-1)))

    @cached_property
    def inradius(self):
        """Euclidean radius of the largest origin-centred ball inside ``K``."""
        # the nearest boundary point has its supporting line orthogonal to it,
        # so the smallest radial distance is the inradius
        dirs = unit_directions(self.dim, 4096 if self.dim == 2 else 8192)
        return float(np.min(1.0 / self.gauge(dirs)))

    def to_json(self):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.to_json()})"


class LpBall(ConvexBody):
    """Unit ball of the (axis-scaled) lp norm, ``1 <= p <= inf``."""

    kind = "lp"

    def __init__(self, p, dim=2, radii=None):
        p = float(p)
        if not p >= 1:
            raise InvalidBody("lp balls need p >= 1")
        if dim not in (2, 3):
            raise InvalidBody("only dimensions 2 and 3 are supported")
        self.p = p
        self.dim = dim
        self.radii = np.ones(dim) if radii is None else np.asarray(radii, dtype=float)
        if self.radii.shape != (dim,) or np.any(self.radii <= 0):
            raise InvalidBody("radii must be positive, one per axis")
        self.strictly_convex = 1 < p < np.inf
        if p == np.inf:
            signs = np.array(np.meshgrid(*[[1.0, -1.0]] * dim, indexing="ij")).reshape(dim, -1).T
            self.vertices = signs * self.radii
        elif p == 1:
            eye = np.eye(dim)
            self.vertices = np.concatenate([[e, -e] for e in eye]) * self.radii

    def gauge(self, x):
        y = np.abs(_as_points(x, self.dim) / self.radii)
        if self.p == np.inf:
            return np.max(y, axis=-1)
        if self.p == 1:
            return np.sum(y, axis=-1)
        if self.p == 2:
            with np.errstate(over="ignore", under="ignore"):
                r = np.sqrt(np.sum(y * y, axis=-1))
            if np.all((r > 1e-150) & (r < 1e150)):
                return r
        top = np.max(y, axis=-1)
        safe = np.where(top > 0, top, 1.0)
        return top * np.sum((y / safe[..., None]) ** self.p, axis=-1) ** (1 / self.p)

    def support(self, u):
        u = _as_points(u, self.dim)
        y = u * self.radii
        if not np.any(y):
            raise ZeroVector("support needs a nonzero functional")
        if self.p == np.inf:
            x = np.where(y >= 0, 1.0, -1.0)
            return float(np.sum(np.abs(y))), x * self.radii
        if self.p == 1:
            k = int(np.argmax(np.abs(y)))
            x = np.zeros(self.dim)
            x[k] = np.sign(y[k])
            return float(abs(y[k])), x * self.radii
        q = self.p / (self.p - 1)
        norm_q = np.sum(np.abs(y) ** q) ** (1 / q)
        x = np.sign(y) * (np.abs(y) / norm_q) ** (q - 1)
        return float(norm_q), x * self.radii

    def to_json(self):
        out = {"kind": "lp", "p": "inf" if self.p == np.inf else self.p, "dim": self.dim}
        if not np.allclose(self.radii, 1.0):
            out["radii"] = self.radii.tolist()
        return out


class Ellipsoid(ConvexBody):
    kind = "ellipse"
    strictly_convex = True

    def __init__(self, axes):
        self.axes = np.asarray(axes, dtype=float)
        if self.axes.ndim != 1 or len(self.axes) not in (2, 3) or np.any(self.axes <= 0):
            raise InvalidBody("ellipsoid axes must be 2 or 3 positive numbers")
        self.dim = len(self.axes)

    def gauge(self, x):
        return np.linalg.norm(_as_points(x, self.dim) / self.axes, axis=-1)

    def support(self, u):
        y = _as_points(u, self.dim) * self.axes
        n = np.linalg.norm(y)
        if n == 0:
            raise ZeroVector("support needs a nonzero functional")
        return float(n), self.axes * y / n

    @property
    def inradius(self):
        return float(np.min(self.axes))

    @property
    def outradius(self):
        return float(np.max(self.axes))

    def to_json(self):
        return {"kind": "ellipse", "axes": self.axes.tolist()}


def is_extreme(points, index):
    """Whether ``points[index]`` lies outside the hull of the other points.

    Decided by linear feasibility: is there a convex combination of the
    others equal to the point?
    """
    points = np.asarray(points, dtype=float)
    others = np.delete(points, index, axis=0)
    target = points[index]
    if len(others) == 0:
        return True
    k = len(others)
    a_eq = np.vstack([others.T, np.ones((1, k))])
    b_eq = np.append(target, 1.0)
    res = linprog(np.zeros(k), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * k, method="highs")
    return res.status != 0


class Polytope(ConvexBody):
    """Convex hull of a finite vertex list containing the origin inside.

    Support ties are broken towards the lowest vertex index so outputs are
    reproducible.
    """

    kind = "polytope"

    def __init__(self, vertices, check_extreme=True):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] not in (2, 3):
            raise InvalidBody("vertices must have shape (k, 2) or (k, 3)")
        if not np.all(np.isfinite(v)):
            raise NonFiniteInput("vertices must be finite")
        self.dim = v.shape[1]
        if len(v) < self.dim + 1:
            raise TooFewVertices(f"need at least {self.dim + 1} vertices")
        self.vertices = v
        try:
            self.hull = ConvexHull(v)
        except Exception as exc:  # qhull raises its own error type
            raise InvalidBody(f"degenerate vertex set: {exc}") from exc
        normals = self.hull.equations[:, :-1]
        offsets = -self.hull.equations[:, -1]
        if np.any(offsets <= 1e-12):
            raise InvalidBody("the origin must be an interior point")
        self._facet_functionals = normals / offsets[:, None]
        if check_extreme and len(set(self.hull.vertices.tolist())) != len(v):
            bad = [i for i in range(len(v)) if not is_extreme(v, i)]
            if bad:
                raise InvalidBody(f"vertices {bad} are not extreme")

    @property
    def facets(self):
        """Index arrays of the hull's facets (edges in 2D, triangles in 3D)."""
        return self.hull.simplices

    @property
    def facet_functionals(self):
        """Rows ``u`` with ``<u, x> <= 1`` describing the polytope."""
        return self._facet_functionals

    @cached_property
    def symmetric(self):
        v = self.vertices
        d = np.linalg.norm(v[:, None, :] + v[None, :, :], axis=-1)
        return bool(np.all(d.min(axis=1) < 1e-9 * max(1.0, np.abs(v).max())))

    def gauge(self, x):
        x = _as_points(x, self.dim)
        return np.maximum(np.max(x @ self._facet_functionals.T, axis=-1), 0.0)

    def support(self, u):
        u = _as_points(u, self.dim)
        if not np.any(u):
            raise ZeroVector("support needs a nonzero functional")
        vals = self.vertices @ u
        best = vals.max()
        scale = np.linalg.norm(u) * np.abs(self.vertices).max()
        k = int(np.flatnonzero(vals >= best - 1e-12 * scale)[0])
        return float(vals[k]), self.vertices[k].copy()

    @property
    def outradius(self):
        return float(np.max(np.linalg.norm(self.vertices, axis=-1)))

    @property
    def inradius(self):
        return float(np.min(1.0 / np.linalg.norm(self._facet_functionals, axis=-1)))

    def to_json(self):
        return {"kind": "polytope", "vertices": self.vertices.tolist()}


class MembershipBody(ConvexBody):
    """A body known through a vectorised membership test.

    ``contains(x)`` takes an array of shape ``(..., n)`` and returns booleans.
    ``inradius`` must be a lower bound on the Euclidean inradius: it sets the
    bracket for the gauge bisection.  ``support`` may be supplied; otherwise
    it is estimated from dense boundary sampling plus local refinement.
    """

    kind = "oracle"

    def __init__(self, contains, dim, inradius, strictly_convex=False, support=None,
                 tol=GAUGE_TOL):
        self._contains = contains
        self.dim = dim
        self._inradius = float(inradius)
        self.strictly_convex = strictly_convex
        self._support = support
        self.tol = tol

    @property
    def inradius(self):
        return self._inradius

    def gauge(self, x):
        x = _as_points(x, self.dim)
        flat = x.reshape(-1, self.dim)
        norms = np.linalg.norm(flat, axis=-1)
        out = np.zeros(len(flat))
        nz = norms > 0
        if not np.any(nz):
            return out.reshape(x.shape[:-1])
        u = flat[nz] / norms[nz, None]
        hi = np.full(len(u), 2.0 / self._inradius)
        self._check_monotone(u, hi[0])
        lo = np.zeros(len(u))
        # t is the gauge of u: u / t on the boundary; search 1/t along the ray
        while np.max(hi - lo) > self.tol * 1e-2:
            mid = 0.5 * (lo + hi)
            inside = self._contains(u / mid[:, None])
            lo = np.where(~inside, mid, lo)
            hi = np.where(inside, mid, hi)
            if np.max(hi - lo) < 1e-300:
                break
        out[nz] = norms[nz] * 0.5 * (lo + hi)
        return out.reshape(x.shape[:-1])

    def _check_monotone(self, u, top):
        ts = np.linspace(0.02, 1.0, 40) * top
        pts = u[:, None, :] / ts[None, :, None]
        inside = np.asarray(self._contains(pts))
        # along 1/t decreasing (points moving inwards) membership must switch once
        flips = np.count_nonzero(np.diff(inside.astype(int), axis=1), axis=1)
        if np.any(flips > 1):
            raise OracleInconsistent("membership is not monotone along a ray")
        if not np.all(inside[:, -1]):
            raise OracleInconsistent("inradius bound is violated")

    def support(self, u):
        u = _as_points(u, self.dim)
        if not np.any(u):
            raise ZeroVector("support needs a nonzero functional")
        if self._support is not None:
            val, x = self._support(u)
            return float(val), np.asarray(x, dtype=float)
        return _support_by_sampling(self, u)

    @cached_property
    def outradius(self):
        pts = self.boundary_samples(2048 if self.dim == 2 else 4096)
        return float(np.max(np.linalg.norm(pts, axis=-1)))

    def to_json(self):
        return {"kind": "oracle", "dim": self.dim}


def _support_by_sampling(body, u, count=None):
    count = count or (2048 if body.dim == 2 else 4096)
    if body.dim == 2:
        t = 2 * np.pi * np.arange(count) / count
        vals = body.boundary_point(np.stack([np.cos(t), np.sin(t)], -1)) @ u
        k = int(np.argmax(vals))
        step = 2 * np.pi / count

        def neg(a):
            return -float(body.boundary_point(np.array([np.cos(a), np.sin(a)])) @ u)

        res = minimize_scalar(neg, bounds=(t[k] - step, t[k] + step), method="bounded",
                              options={"xatol": 1e-12})
        a = res.x
        x = body.boundary_point(np.array([np.cos(a), np.sin(a)]))
        return float(x @ u), x
    dirs = fibonacci_sphere(count)
    vals = body.boundary_point(dirs) @ u
    d0 = dirs[int(np.argmax(vals))]

    def neg3(d):
        return -float(body.boundary_point(d) @ u)

    res = minimize(neg3, d0, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14})
    x = body.boundary_point(res.x)
    return float(x @ u), x


def disk():
    return LpBall(2, dim=2)


def square():
    return LpBall(np.inf, dim=2)


def regular_polygon(k, phase=0.0, radius=1.0):
    t = phase + 2 * np.pi * np.arange(k) / k
    return Polytope(radius * np.stack([np.cos(t), np.sin(t)], axis=-1))


def hexagon():
    return regular_polygon(6)


def ball3():
    return LpBall(2, dim=3)


def body_from_json(data):
    """Build a body from its JSON description (see the README for the schema)."""
    kind = data.get("kind")
    if kind == "lp":
        p = data.get("p")
        if p is None:
            raise InvalidBody("lp body needs field 'p'")
        p = np.inf if str(p).lower() in ("inf", "infinity") else float(p)
        return LpBall(p, dim=int(data.get("dim", 2)), radii=data.get("radii"))
    if kind in ("ellipse", "ellipsoid"):
        if "axes" not in data:
            raise InvalidBody("ellipse body needs field 'axes'")
        return Ellipsoid(data["axes"])
    if kind == "polytope":
        if "vertices" not in data:
            raise InvalidBody("polytope body needs field 'vertices'")
        return Polytope(data["vertices"])
    raise InvalidBody(f"unknown body kind {kind!r} (field 'kind')")


def gauge(K, v):
    """Minkowski functional of ``K`` at ``v`` (a float for a single vector)."""
    g = K.gauge(v)
    return float(g) if np.ndim(g) == 0 else g


def boundary_point(K, u):
    return K.boundary_point(u)


def support(K, u):
    return K.support(u)


def exposed_point(K, phi, gap_tol=1e-9):
    """Unique minimiser ``q`` of the functional ``phi`` over ``K`` and its value.

    Raises :class:`NonExposedDirection` when the minimum is attained along a
    nondegenerate face.
    """
    phi = _as_points(phi, K.dim)
    if not np.any(phi):
        raise ZeroVector("functional must be nonzero")
    scale = np.linalg.norm(phi) * K.outradius
    if K.vertices is not None:
        vals = K.vertices @ phi
        m = vals.min()
        ties = np.flatnonzero(vals <= m + 1e-12 * scale)
        if len(ties) > 1:
            raise NonExposedDirection(f"functional is minimised on a face through vertices {ties.tolist()}")
        return K.vertices[ties[0]].copy(), float(m)
    val, q = K.support(-phi)
    m = -val
    if K.strictly_convex:
        return q, float(m)
    # sample-based gap test away from q
    pts = K.boundary_samples(10000 if K.dim == 2 else 20000)
    far = np.linalg.norm(pts - q, axis=-1) > 1e-3 * K.outradius
    if np.any(pts[far] @ phi <= m + gap_tol * scale):
        raise NonExposedDirection("minimum is not isolated at sampled resolution")
    return q, float(m)


def polytope_approx(K, m):
    """Inscribed polytope on ``m`` boundary points of ``K``.

    Equal-angle directions in the plane, Fibonacci directions in space.
    Boundary points that are not extreme in the sample (possible when ``K``
    has flat faces) are dropped.
    """
    if m < K.dim + 1:
        raise TooFewVertices(f"need m >= {K.dim + 1}")
    pts = K.boundary_samples(m)
    keep = np.sort(ConvexHull(pts).vertices)
    return Polytope(pts[keep], check_extreme=False)


def _segment_distance(x, a, b):
    """Distances from points ``x (N, n)`` to segments ``[a, b]`` (E, n) -> (N, E)."""
    ab = b - a
    ax = x[:, None, :] - a[None, :, :]
    t = np.clip(np.einsum("nei,ei->ne", ax, ab) / np.einsum("ei,ei->e", ab, ab), 0.0, 1.0)
    return np.linalg.norm(ax - t[..., None] * ab[None], axis=-1)


def _triangle_distance(x, a, b, c):
    """Distances from points to triangles; (N, n) x (T, n)^3 -> (N, T)."""
    ab, ac = b - a, c - a
    normal = np.cross(ab, ac)
    nn = np.einsum("ti,ti->t", normal, normal)
    ax = x[:, None, :] - a[None]
    # projection onto the plane and its barycentric coordinates
    dist_plane = np.einsum("nti,ti->nt", ax, normal) / np.sqrt(nn)
    proj = ax - (np.einsum("nti,ti->nt", ax, normal) / nn)[..., None] * normal[None]
    v = np.einsum("nti,ti->nt", np.cross(proj, ac[None]), normal) / nn
    w = np.einsum("nti,ti->nt", np.cross(ab[None], proj), normal) / nn
    inside = (v >= 0) & (w >= 0) & (v + w <= 1)
    edge = np.minimum(np.minimum(_segment_distance(x, a, b), _segment_distance(x, b, c)),
                      _segment_distance(x, c, a))
    return np.where(inside, np.abs(dist_plane), edge)


def distance_to_polytope(P, x):
    """Euclidean distance from points to the polytope ``P`` (0 inside)."""
    x = np.atleast_2d(_as_points(x, P.dim))
    f = P.facets
    v = P.vertices
    if P.dim == 2:
        d = _segment_distance(x, v[f[:, 0]], v[f[:, 1]])
    else:
        d = _triangle_distance(x, v[f[:, 0]], v[f[:, 1]], v[f[:, 2]])
    out = d.min(axis=1)
    return np.where(P.gauge(x) <= 1 + 1e-15, 0.0, out)


def _angle_param(body, a):
    return body.boundary_point(np.array([np.cos(a), np.sin(a)]))


def _sphere_param(body, ang):
    th, ph = ang
    return body.boundary_point(np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)]))


def _refined_extremum(body, fn, resolution, maximize):
    """Extremum of ``fn`` over the boundary of ``body``: dense scan, then polish."""
    sign = -1.0 if maximize else 1.0
    if body.dim == 2:
        t = 2 * np.pi * np.arange(resolution) / resolution
        pts = body.boundary_point(np.stack([np.cos(t), np.sin(t)], -1))
        vals = sign * fn(pts)
        step = 2 * np.pi / resolution
        best = float(vals.min())
        for k in np.argsort(vals)[:8]:
            res = minimize_scalar(lambda a: sign * float(fn(_angle_param(body, a)[None])[0]),
                                  bounds=(t[k] - step, t[k] + step), method="bounded",
                                  options={"xatol": 1e-13})
            best = min(best, float(res.fun))
        return sign * best
    dirs = fibonacci_sphere(resolution)
    vals = sign * fn(body.boundary_point(dirs))
    best = float(vals.min())
    for k in np.argsort(vals)[:8]:
        d = dirs[k]
        ang0 = np.array([np.arccos(np.clip(d[2], -1, 1)), np.arctan2(d[1], d[0])])
        res = minimize(lambda a: sign * float(fn(_sphere_param(body, a)[None])[0]), ang0,
                       method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15})
        best = min(best, float(res.fun))
    return sign * best


def hausdorff_report(P, Q, resolution=4096):
    """Hausdorff distance with a note on how it was computed.

    Polytope pairs are handled exactly (vertex-to-facet distances).  Against
    a general body the boundary of ``Q`` is scanned at ``resolution`` samples
    and the worst samples are polished by local optimisation.
    """
    if P.dim != Q.dim:
        raise DimensionMismatch("bodies live in different dimensions")
    if isinstance(Q, Polytope) and not isinstance(P, Polytope):
        P, Q = Q, P
    if not isinstance(P, Polytope):
        raise TypeError("the first body must be a polytope")
    if isinstance(Q, Polytope):
        d = max(distance_to_polytope(Q, P.vertices).max(), distance_to_polytope(P, Q.vertices).max())
        return {"distance": float(d), "exact": True, "resolution": None}
    # sup over Q of the distance to P is attained on the boundary of Q
    d_qp = _refined_extremum(Q, lambda x: distance_to_polytope(P, x), resolution, maximize=True)
    d_pq = 0.0
    for v in P.vertices:
        if Q.gauge(v) > 1:
            dv = _refined_extremum(Q, lambda x, v=v: np.linalg.norm(x - v, axis=-1), resolution,
                                   maximize=False)
            d_pq = max(d_pq, dv)
    return {"distance": float(max(d_qp, d_pq)), "exact": False, "resolution": resolution}


def hausdorff_distance(P, Q, resolution=4096):
    return hausdorff_report(P, Q, resolution)["distance"]


def radial_transport(K_from, K_to, f, tol=1e-8):
    """Move a sampled boundary self-map of ``K_from`` onto ``K_to`` along rays."""
    if K_from.dim != K_to.dim or f.dim != K_to.dim:
        raise DimensionMismatch("bodies and map must share a dimension")
    if np.any(np.abs(K_from.gauge(f.domain) - 1) > tol):
        raise ValueError("domain samples are not on the boundary of the source body")
    return SphereMapSamples(K_to.boundary_point(f.domain), K_to.boundary_point(f.image), f.faces)
