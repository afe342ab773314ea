"""Numerical forms of the impossibility results.

* :func:`theta_bound` measures the smallest angle between a chord bisected
  near the origin and the line through its midpoint.  A positive angle rules
  out any section of the midpoint map that is continuous at the origin.
* :func:`discontinuity_witness` looks for two nearby midpoints whose chords,
  as chosen by a candidate section, are far apart.
* :func:`lambda_forcing_check` records why two-term decompositions need
  equal weights and antipodal values at the origin.
* :func:`convex_decomposition_refuter` plays boundary winding against
  centre winding for claimed finite convex decompositions.
* :func:`face_containment_check` tests that convex combinations hitting a
  boundary point stay on one supporting hyperplane.
"""

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .body import Ellipsoid, LpBall, Polytope, _as_points
from .degree import winding_number
from .errors import (
    InvalidSection,
    MalformedInput,
    NoChordsFound,
    NoSupportFunctional,
    NotOnBoundary,
    NotOnSphere,
    SamplingTooCoarse,
    SectionUndefinedEverywhere,
    SphereSpanError,
)
from .maps import SampledMap, SphereMapSamples
from .section import Chord, _find_chords, chord_map_batch, d_sym_batch

RINGS = (1.0, 0.75, 0.5, 0.25, 1e-3)


# ---------------------------------------------------------------- theta


def line_angle(p, d):
    """Angle in ``[0, pi/2]`` between the lines spanned by ``p`` and ``d``."""
    p = np.asarray(p, dtype=float)
    d = np.asarray(d, dtype=float)
    c = np.abs(np.sum(p * d, axis=-1)) / (np.linalg.norm(p, axis=-1) * np.linalg.norm(d, axis=-1))
    return np.arccos(np.clip(c, 0.0, 1.0))


@dataclass(frozen=True)
class ThetaBound:
    """Smallest midpoint-line/chord angle over a sampled punctured gauge ball."""

    body: dict
    U_radius: float
    theta: float
    midpoint_samples: int
    chord_resolution: int
    witness_p: np.ndarray
    witness_chord: Chord
    double_chord_residual: float
    scan: np.ndarray = field(repr=False, compare=False)

    def witness_angle(self):
        c = self.witness_chord
        return float(line_angle(self.witness_p, c.p2 - c.p1))

    def to_json(self):
        return {
            "body": self.body,
            "U_radius": self.U_radius,
            "theta": self.theta,
            "midpoint_samples": self.midpoint_samples,
            "chord_resolution": self.chord_resolution,
            "witness": {"p": self.witness_p.tolist(), "chord": self.witness_chord.to_json()},
            "double_chord_residual": self.double_chord_residual,
        }

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["p_x", "p_y", "angle"])
            for row in self.scan:
                w.writerow([repr(float(x)) for x in row])


def _theta_midpoints(K2, U_radius, angles):
    """Nested sample set: rings at gauge ``2**(-k/4)`` in ``[1e-3, U_radius]``."""
    radii = [2.0 ** (-k / 4) for k in range(0, 200)]
    radii = [r for r in radii if 1e-3 <= r <= U_radius]
    if not radii:
        radii = [U_radius]
    t = 2 * np.pi * np.arange(angles) / angles
    dirs = K2.boundary_point(np.stack([np.cos(t), np.sin(t)], -1))
    return np.concatenate([r * dirs for r in radii])


def theta_bound(K2, U_radius, midpoint_samples=2000, chord_resolution=4000):
    """Brute-force lower bound on chord angles for midpoints near the origin.

    Midpoints lie on rings of gauge ``2**(-k/4)`` between ``1e-3`` and
    ``U_radius``, with ``midpoint_samples / 20`` directions per ring, so the
    sample sets are nested as ``U_radius`` grows.  Every bisected chord of
    every midpoint enters the minimum.  The residual of the double-chord
    identity ``|| -p0 - p1 || = 2 ||p||`` is recorded too.
    """
    if K2.dim != 2:
        raise ValueError("theta_bound works on planar bodies")
    if not 0 < U_radius <= K2.inradius / 10:
        raise ValueError(f"U_radius must lie in (0, inradius/10] = (0, {K2.inradius / 10:.4g}]")
    angles = max(1, int(math.ceil(midpoint_samples / 20)))
    P = _theta_midpoints(K2, U_radius, angles)
    best = (np.inf, None, None)
    scan = np.empty((len(P), 3))
    dbl = 0.0
    for i, p in enumerate(P):
        chords = _find_chords(K2, p, chord_resolution)
        if not chords:
            raise NoChordsFound(f"no chord found for midpoint {p.tolist()}; raise the resolution")
        a = np.array([c.p1 for c in chords])
        b = np.array([c.p2 for c in chords])
        ang = line_angle(p, b - a)
        k = int(np.argmin(ang))
        scan[i] = (p[0], p[1], ang[k])
        # q = -p0 and ||q - p1|| = 2 ||p||
        dbl = max(dbl, float(np.max(np.abs(np.linalg.norm(-a - b, axis=-1) - 2 * np.linalg.norm(p)))))
        if ang[k] < best[0]:
            best = (float(ang[k]), p.copy(), chords[k])
    return ThetaBound(K2.to_json(), float(U_radius), best[0], len(P), chord_resolution,
                      best[1], best[2], dbl, scan)


# ---------------------------------------------------------------- sections


@dataclass(frozen=True)
class WitnessReport:
    """Outcome of :func:`discontinuity_witness`.

    ``found`` says whether two nearby midpoints with far-apart chords were
    located; if so ``p``, ``p_prime`` and their chords are filled in.
    """

    found: bool
    jump: float
    round: int
    radius: float
    spacing: float
    p: np.ndarray = None
    p_prime: np.ndarray = None
    chord: Chord = None
    chord_prime: Chord = None
    failures: int = 0

    def to_json(self):
        out = {"found": self.found, "jump": self.jump, "round": self.round,
               "radius": self.radius, "spacing": self.spacing, "failures": self.failures}
        if self.found:
            out.update(p=self.p.tolist(), p_prime=self.p_prime.tolist(),
                       chord=self.chord.to_json(), chord_prime=self.chord_prime.to_json())
        else:
            out["status"] = "consistent at this resolution"
        return out


def discontinuity_witness(K2, section, U_radius, grid=256, jump=0.5, rounds=8, tol=1e-8):
    """Search for a jump of a candidate section near the origin.

    Round ``k`` evaluates ``section`` on ``grid`` points of the ring of gauge
    radius ``U_radius / 2**k``.  The grid spacing is taken to be that radius,
    so every pair on the ring is within twice the spacing.  The first round
    with a pair whose chords differ by at least ``jump`` in ``d_sym`` yields
    the witness.  Chords violating the midpoint property raise
    :class:`InvalidSection`; other evaluation errors are counted and skipped.
    """
    t = 2 * np.pi * np.arange(grid) / grid
    dirs = K2.boundary_point(np.stack([np.cos(t), np.sin(t)], -1))
    failures = 0
    evaluated = 0
    best = None
    for k in range(rounds):
        r = U_radius / 2**k
        pts = r * dirs
        ok, A, B = [], [], []
        for p in pts:
            try:
                c = section(p)
            except SphereSpanError:
                failures += 1
                continue
            mid_err = float(np.max(np.abs((c.p1 + c.p2) / 2 - p)))
            g_err = float(max(abs(K2.gauge(c.p1) - 1), abs(K2.gauge(c.p2) - 1)))
            if mid_err > tol or g_err > tol:
                raise InvalidSection(
                    f"section at {p.tolist()} returned a chord with midpoint error {mid_err:.3g}"
                    f" and gauge error {g_err:.3g}")
            ok.append(p)
            A.append(c.p1)
            B.append(c.p2)
        evaluated += len(ok)
        if len(ok) < 2:
            continue
        A, B = np.array(A), np.array(B)
        D = d_sym_batch(A[:, None], B[:, None], A[None], B[None])
        i, j = np.unravel_index(int(np.argmax(D)), D.shape)
        spacing = float(np.max(np.linalg.norm(pts, axis=-1)))
        if D[i, j] >= jump:
            return WitnessReport(True, float(D[i, j]), k, r, spacing, ok[i], ok[j],
                                 Chord(A[i], B[i]), Chord(A[j], B[j]), failures)
        best = WitnessReport(False, float(D[i, j]), k, r, spacing, failures=failures)
    if evaluated == 0:
        raise SectionUndefinedEverywhere("the section failed at every sample")
    return best


def _chords_cached(K2, resolution):
    @lru_cache(maxsize=None)
    def chords(key):
        return tuple(_find_chords(K2, np.frombuffer(key), resolution))

    def get(p):
        cs = chords(np.asarray(p, dtype=float).tobytes())
        if not cs:
            raise NoChordsFound("no chord at this resolution")
        return cs

    return get


def _oriented(c, first):
    return Chord(c.p1, c.p2) if first is c.p1 else Chord(c.p2, c.p1)


def heuristic_sections(K2, resolution=4096):
    """Twenty plausible chord selections, as ``(name, callable)`` pairs.

    They cover first-root sweeps from several start angles, alignment with
    fixed directions, extremes of fixed functionals, proximity to fixed
    boundary points, the counter-clockwise chord map, and longest or shortest
    chords.
    """
    get = _chords_cached(K2, resolution)

    def first_root(offset):
        def s(p):
            cs = get(p)
            ang = [(math.atan2(c.p1[1], c.p1[0]) - offset) % (2 * np.pi) for c in cs]
            ang2 = [(math.atan2(c.p2[1], c.p2[0]) - offset) % (2 * np.pi) for c in cs]
            k = int(np.argmin(np.minimum(ang, ang2)))
            c = cs[k]
            return _oriented(c, c.p1 if ang[k] <= ang2[k] else c.p2)
        return s

    def nearest_direction(theta):
        d = np.array([math.cos(theta), math.sin(theta)])

        def s(p):
            cs = get(p)
            k = int(np.argmin([line_angle(d, c.p2 - c.p1) for c in cs]))
            c = cs[k]
            return _oriented(c, c.p1 if (c.p2 - c.p1) @ d >= 0 else c.p2)
        return s

    def max_functional(theta):
        u = np.array([math.cos(theta), math.sin(theta)])

        def s(p):
            cs = get(p)
            k = int(np.argmax([max(c.p1 @ u, c.p2 @ u) for c in cs]))
            c = cs[k]
            return _oriented(c, c.p1 if c.p1 @ u >= c.p2 @ u else c.p2)
        return s

    def nearest_point(theta):
        x = K2.boundary_point(np.array([math.cos(theta), math.sin(theta)]))

        def s(p):
            cs = get(p)
            dist = [min(np.linalg.norm(c.p1 - x), np.linalg.norm(c.p2 - x)) for c in cs]
            c = cs[int(np.argmin(dist))]
            return _oriented(c, c.p1 if np.linalg.norm(c.p1 - x) <= np.linalg.norm(c.p2 - x) else c.p2)
        return s

    def ccw(p):
        cs = get(p)
        c = cs[0]
        return c if c.p1[0] * c.p2[1] - c.p1[1] * c.p2[0] >= 0 else c.swapped()

    def by_length(longest):
        def s(p):
            cs = get(p)
            L = [np.linalg.norm(c.p2 - c.p1) for c in cs]
            return cs[int(np.argmax(L) if longest else np.argmin(L))]
        return s

    out = [(f"first-root@{k}pi/3", first_root(k * np.pi / 3)) for k in range(6)]
    out += [(f"nearest-direction@{k}pi/4", nearest_direction(k * np.pi / 4)) for k in range(4)]
    out += [(f"max-functional@{k}pi/2", max_functional(k * np.pi / 2)) for k in range(4)]
    out += [(f"nearest-point@{label}", nearest_point(a))
            for label, a in (("pi/6", np.pi / 6), ("5pi/6", 5 * np.pi / 6), ("3pi/2", 3 * np.pi / 2))]
    out += [("ccw", ccw), ("longest", by_length(True)), ("shortest", by_length(False))]
    return out


# ---------------------------------------------------------------- lambda = 1/2


def lambda_forcing_check(alpha1, alpha2, s1, s2, K, tol=1e-9):
    """Does ``alpha1 s1 + alpha2 s2 = 0`` hold, and does it force ``alpha1 = 1/2``?

    ``Forced`` means the combination vanishes with equal weights and
    antipodal values.  Anything else is ``Violated``, with ``residual`` the
    gauge of the combination; by the triangle inequality it is at least
    ``|alpha1 - alpha2|``.
    """
    s1 = _as_points(s1, K.dim)
    s2 = _as_points(s2, K.dim)
    for name, s in (("s1", s1), ("s2", s2)):
        g = float(K.gauge(s))
        if abs(g - 1) > 1e-8:
            raise NotOnSphere(f"{name} has gauge {g}")
    if abs(alpha1 + alpha2 - 1) > 1e-12 or alpha1 < 0 or alpha2 < 0:
        raise MalformedInput("alpha1, alpha2 must be convex weights")
    residual = float(K.gauge(alpha1 * s1 + alpha2 * s2))
    alpha_gap = abs(alpha1 - 0.5)
    antipodal_gap = float(np.linalg.norm(s1 + s2))
    forced = residual <= tol and alpha_gap <= 1e-9 and antipodal_gap <= 1e-8
    return {
        "status": "Forced" if forced else "Violated",
        "residual": residual,
        "lower_bound": abs(alpha1 - alpha2),
        "alpha_gap": alpha_gap,
        "antipodal_gap": antipodal_gap,
    }


# ---------------------------------------------------------------- refuter


@dataclass(frozen=True)
class Rejection:
    """The first check a claimed decomposition fails."""

    check: str
    detail: str

    def to_json(self):
        return {"result": "rejected", "check": self.check, "detail": self.detail}


@dataclass(frozen=True)
class ContradictionCertificate:
    """A claimed convex decomposition whose component has two different degrees.

    ``boundary_degree`` comes from the component fixing the extreme points;
    ``center_degree`` from shrinking the domain radially to a near-constant
    loop.  ``transition`` gives the two rings between which the component's
    winding changes, which is where the claimed continuity fails.
    """

    lambdas: list
    component: int
    boundary_degree: int
    center_degree: int
    rings: list
    windings: list
    transition: tuple
    reconstruction_error: float
    sphere_error: float
    statement: str
    components: list = field(default_factory=list, repr=False)
    samples: list = field(default_factory=list, repr=False)

    def to_json(self):
        return {
            "result": "contradiction",
            "lambdas": list(self.lambdas),
            "component": self.component,
            "boundary_degree": self.boundary_degree,
            "center_degree": self.center_degree,
            "rings": list(self.rings),
            "windings": self.windings,
            "transition": list(self.transition),
            "reconstruction_error": self.reconstruction_error,
            "sphere_error": self.sphere_error,
            "statement": self.statement,
            "samples": self.samples,
            "components": self.components,
        }


def ring_samples(K2, rings=RINGS, per_ring=256):
    """Points on the scaled boundaries ``t ∂K2`` for each ``t`` in ``rings``."""
    a = 2 * np.pi * np.arange(per_ring) / per_ring
    b = K2.boundary_point(np.stack([np.cos(a), np.sin(a)], -1))
    return np.concatenate([t * b for t in rings])


def _group_rings(K2, points):
    g = K2.gauge(points)
    levels = np.unique(np.round(g, 9))[::-1]
    groups = []
    for t in levels:
        idx = np.flatnonzero(np.abs(g - t) <= 1e-8 * max(1.0, t))
        ang = np.arctan2(points[idx, 1], points[idx, 0])
        groups.append((float(t), idx[np.argsort(ang)]))
    return groups


def convex_decomposition_refuter(K2, components, lambdas, tol=1e-6):
    """Refute a claimed convex decomposition of the identity into sphere-valued maps.

    ``components`` are :class:`SampledMap` objects sharing the same domain
    samples, which must lie on concentric rings ``t ∂K2`` including ``t = 1``.
    Returns a :class:`ContradictionCertificate` or the :class:`Rejection`
    naming the first failed check.
    """
    lam = np.asarray(lambdas, dtype=float)
    if lam.ndim != 1 or len(lam) != len(components) or len(lam) == 0:
        raise MalformedInput("need one lambda per component")
    if np.any(lam < 0) or abs(lam.sum() - 1) > 1e-12:
        raise MalformedInput(f"lambdas {lam.tolist()} are not convex weights")
    X = components[0].points
    if X.shape[1] != 2 or any(c.points.shape != X.shape or np.any(c.points != X) for c in components):
        raise MalformedInput("components must share planar domain samples")
    groups = _group_rings(K2, X)
    if len(groups) < 2 or abs(groups[0][0] - 1) > 1e-8:
        raise MalformedInput("samples must include the boundary ring and at least one inner ring")
    F = [c.values for c in components]

    # (i) reconstruction
    recon = sum(a * f for a, f in zip(lam, F))
    err = np.linalg.norm(recon - X, axis=-1)
    if err.max() > tol:
        k = int(np.argmax(err))
        return Rejection("reconstruction",
                         f"error {err.max():.3g} at sample {k} (gauge {float(K2.gauge(X[k])):.3g})")
    # (ii) sphere-valued
    sph = max(float(np.max(np.abs(K2.gauge(f) - 1))) for f in F)
    if sph > 1e-8:
        return Rejection("sphere", f"a component reaches gauge error {sph:.3g}")
    # (iii) extreme points of K2 on the boundary ring are fixed
    t0, outer = groups[0]
    xb = X[outer]
    if K2.vertices is not None:
        is_ext = np.array([np.min(np.linalg.norm(K2.vertices - x, axis=-1)) <= 1e-12 for x in xb])
    else:
        is_ext = np.ones(len(xb), dtype=bool)
    for i, f in enumerate(F):
        if lam[i] > 0 and np.any(np.linalg.norm(f[outer][is_ext] - xb[is_ext], axis=-1) > tol):
            return Rejection("extreme", f"component {i} moves an extreme point")
    # (iv) windings on every ring
    windings = []
    try:
        for i, f in enumerate(F):
            windings.append([winding_number(SphereMapSamples(X[idx], f[idx])) for _, idx in groups])
    except SamplingTooCoarse as exc:
        return Rejection("sampling", str(exc))
    rings = [t for t, _ in groups]
    inner = groups[-1][1]
    for i, f in enumerate(F):
        if lam[i] == 0:
            continue
        if windings[i][0] != 1:
            return Rejection("boundary-winding", f"component {i} has boundary winding {windings[i][0]}")
        loop = f[inner]
        spread = float(np.max(np.linalg.norm(loop - loop[0], axis=-1)))
        if spread >= K2.inradius:
            return Rejection("center", f"component {i} is discontinuous at center: innermost ring "
                                       f"t={rings[-1]:.3g} spreads {spread:.3g}")
    for i in range(len(F)):
        if lam[i] > 0 and windings[i][-1] == 0:
            w = windings[i]
            j = next(j for j in range(1, len(w)) if w[j] != w[j - 1])
            stmt = (f"component {i} fixes the extreme points, so its boundary degree is 1; "
                    f"shrinking radially gives a near-constant loop of degree 0; its winding "
                    f"jumps between rings t={rings[j - 1]:.3g} and t={rings[j]:.3g}, "
                    f"so it is not continuous there")
            return ContradictionCertificate(
                lambdas=lam.tolist(), component=i, boundary_degree=1, center_degree=0,
                rings=rings, windings=windings, transition=(rings[j - 1], rings[j]),
                reconstruction_error=float(err.max()), sphere_error=sph, statement=stmt,
                components=[f.tolist() for f in F], samples=X.tolist())
    return Rejection("center", "no component reaches winding 0 at the innermost ring")


def _center_solve(K2, P, angles0, steps=8, iters=30):
    """Angles ``theta`` with ``mean_i gamma(theta_i) = P`` near ``angles0``.

    Continuation in the target from 0 to ``P`` with minimum-norm
    Gauss-Newton steps; returns ``None`` if any point fails to converge.
    """
    n = len(P)
    th = np.tile(angles0, (n, 1))
    k = len(angles0)

    def gamma(a):
        return K2.boundary_point(np.stack([np.cos(a), np.sin(a)], -1))

    h = 1e-7
    for s in np.linspace(0, 1, steps + 1)[1:]:
        target = s * P
        for _ in range(iters):
            G = gamma(th)
            r = G.mean(axis=1) - target
            if np.max(np.abs(r)) <= 1e-14:
                break
            J = (gamma(th + h) - gamma(th - h)) / (2 * h) / k  # (n, k, 2)
            J = np.transpose(J, (0, 2, 1))  # (n, 2, k)
            th = th - np.einsum("nkj,nj->nk", np.linalg.pinv(J), r)
        else:
            return None
    r = gamma(th).mean(axis=1) - P
    if np.max(np.abs(r)) > 1e-12:
        return None
    return gamma(th)


def _rings_resolved(values, per_ring, limit=np.pi / 8):
    """Whether every component moves less than ``limit`` between ring neighbours."""
    for start in range(0, len(values), per_ring):
        block = values[start:start + per_ring]
        ang = np.arctan2(block[..., 1], block[..., 0])
        step = np.diff(np.concatenate([ang, ang[:1]]), axis=0)
        step = (step + np.pi) % (2 * np.pi) - np.pi
        if np.max(np.abs(step)) >= limit:
            return False
    return True


def adversarial_candidates(count=50, seed=0, per_ring=256, rings=RINGS):
    """Claimed convex decompositions of the identity built to look plausible.

    Each candidate uses four sphere-valued components with weights 1/4 on a
    random strictly convex body.  On outer rings the components are the two
    chord endpoints (each twice), so they fix the boundary; on inner rings
    they solve the decomposition continuously around a constant centre
    configuration ``(a, -a, b, -b)``.  Every ring is reproduced exactly, but
    the pieces cannot be glued continuously.

    Returns a list of ``(body, components, lambdas, info)``.
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        if len(out) % 2 == 0:
            K2 = LpBall(float(rng.uniform(1.5, 6.0)), 2)
        else:
            K2 = Ellipsoid([1.0, float(rng.uniform(0.5, 2.0))])
        X = ring_samples(K2, rings, per_ring)
        alpha = float(rng.uniform(0, 2 * np.pi))
        beta = alpha + float(rng.uniform(np.pi / 4, 3 * np.pi / 4))
        center = np.array([alpha, alpha + np.pi, beta, beta + np.pi])
        seam = int(rng.integers(1, len(rings) - 1))
        comps = None
        while seam < len(rings):
            n_outer = seam * per_ring
            inner = _center_solve(K2, X[n_outer:], center)
            if inner is not None and _rings_resolved(inner, per_ring):
                c1, c2 = chord_map_batch(K2, X[:n_outer])
                outer = np.stack([c1, c2, c1, c2], axis=1)
                comps = np.concatenate([outer, inner])
                break
            seam += 1
        if comps is None:
            continue
        maps = [SampledMap(X, comps[:, i]) for i in range(4)]
        info = {"body": K2.to_json(), "seam": rings[seam], "center": center.tolist()}
        out.append((K2, maps, [0.25] * 4, info))
    return out


def partial_candidates(count=50, seed=0, per_ring=256, rings=RINGS):
    """Decompositions valid only on the boundary: every component is ``x / gauge(x)``.

    The refuter must reject these on reconstruction, never certify them.
    """
    rng = np.random.default_rng(seed)
    out = []
    for j in range(count):
        K2 = LpBall(float(rng.uniform(1.5, 6.0)), 2) if j % 2 == 0 else Ellipsoid([1.0, float(rng.uniform(0.5, 2.0))])
        X = ring_samples(K2, rings, per_ring)
        k = int(rng.integers(1, 5))
        lam = rng.dirichlet(np.ones(k))
        lam[-1] = 1 - lam[:-1].sum()
        vals = K2.boundary_point(X)
        out.append((K2, [SampledMap(X, vals) for _ in range(k)], lam.tolist(), {"body": K2.to_json()}))
    return out


# ---------------------------------------------------------------- faces


def support_functional(K, v):
    """A functional ``u`` with ``<u, v> = 1`` supporting ``K`` at boundary point ``v``.

    Polytopes use the active facet whose normal is best aligned with ``v``;
    other bodies use the gauge gradient by central differences.
    """
    v = _as_points(v, K.dim)
    if K.vertices is not None:
        U = (K if isinstance(K, Polytope) else Polytope(K.vertices, check_extreme=False)).facet_functionals
        vals = U @ v
        active = np.flatnonzero(vals >= 1 - 1e-9)
        if len(active) == 0:
            raise NoSupportFunctional("no facet is active at this point")
        align = (U[active] @ v) / np.linalg.norm(U[active], axis=-1)
        return U[active[int(np.argmax(align))]].copy()
    h = 1e-6 * max(1.0, float(np.linalg.norm(v)))
    E = np.eye(K.dim) * h
    grad = (K.gauge(v + E) - K.gauge(v - E)) / (2 * h)
    if not np.all(np.isfinite(grad)) or grad @ v <= 0:
        raise NoSupportFunctional("gauge gradient is degenerate")
    return grad / (grad @ v)


def face_containment_check(K, v, components, lambdas, tol=1e-6):
    """Check that the components of a convex combination equal to ``v`` share its face.

    Precondition failures (the combination misses ``v``, a component lies
    outside ``K``, the weights are not convex) are reported with
    ``passed=False`` and a ``reason``.
    """
    v = _as_points(v, K.dim)
    g = float(K.gauge(v))
    if abs(g - 1) > 1e-9:
        raise NotOnBoundary(f"v has gauge {g}")
    C = np.atleast_2d(np.asarray(components, dtype=float))
    lam = np.asarray(lambdas, dtype=float)
    report = {"passed": False, "reason": None}
    if np.any(lam < 0) or abs(lam.sum() - 1) > 1e-12 or len(lam) != len(C):
        report["reason"] = "weights are not convex"
        return report
    miss = float(np.linalg.norm(lam @ C - v))
    if miss > 1e-9:
        report.update(reason="combination does not reproduce v", reconstruction_error=miss)
        return report
    gc = K.gauge(C)
    if np.any(gc > 1 + 1e-9):
        report.update(reason="a component lies outside the body", max_gauge=float(gc.max()))
        return report
    u = support_functional(K, v)
    vals = C @ u
    dev = np.abs(vals - 1)
    bad = np.flatnonzero((lam > 0) & (dev > tol))
    report.update(
        passed=len(bad) == 0,
        reason=None if len(bad) == 0 else "components leave the supporting hyperplane",
        functional=u.tolist(),
        values=vals.tolist(),
        max_deviation=float(dev[lam > 0].max()),
        failures=bad.tolist(),
    )
    return report


__all__ = [
    "ContradictionCertificate", "Rejection", "ThetaBound", "WitnessReport", "adversarial_candidates",
    "convex_decomposition_refuter", "discontinuity_witness", "face_containment_check",
    "heuristic_sections", "lambda_forcing_check", "line_angle", "partial_candidates",
    "ring_samples", "support_functional", "theta_bound",
]
