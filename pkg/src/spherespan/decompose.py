"""Decompositions of ball-valued maps into combinations of sphere-valued maps.

Every routine returns a :class:`DecompositionCertificate` holding the
coefficients, the sampled component maps and the measured errors, so a
result can be replayed without trusting the code that produced it.

The three-term construction works as follows.  Pick a functional ``phi``
with a unique minimiser ``q`` on ``K`` and a small gauge ball ``U`` near
``q`` that avoids the segment ``[q, -q]``.  Every point of ``U`` is the
midpoint of exactly one chord lying in the thin strip ``phi <= m + eps``;
its endpoints depend continuously on the point.  A homothety ``T`` maps the
unit ball into ``R U``, and ``v = lambda T v + (1 - lambda) p`` then writes
the identity with three sphere-valued terms.
"""

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .body import ConvexBody, _as_points, body_from_json, exposed_point
from .errors import (
    EpsSearchFailed,
    NonExposedDirection,
    NoStripChord,
    MultipleStripChords,
    ParamSearchFailed,
    SearchFailed,
    SphereSpanError,
    VanishingValue,
    DegenerateSection,
)
from .maps import SampledMap
from .section import chord_map_batch, disk_chord_batch, strip_chord

EPS_SAMPLES = 200
MAX_HALVINGS = 40
PARAM_SEEDS = 32
SAFETY = 1.25


# ---------------------------------------------------------------- certificates


@dataclass(frozen=True)
class DecompositionCertificate:
    """Coefficients, components and measured errors of a decomposition.

    ``kind`` is ``"span"`` (arbitrary real coefficients) or ``"convex"``
    (nonnegative coefficients summing to one).  ``components`` holds one
    value array of shape ``(N, n)`` per term, sampled on ``target.points``.
    """

    kind: str
    coefficients: np.ndarray
    components: list
    target: SampledMap
    sup_reconstruction_error: float
    sphere_error: float
    shell_min_gauge: float
    continuity_modulus: list
    params: dict = field(default_factory=dict)
    seed: Optional[int] = None
    notes: list = field(default_factory=list)

    @property
    def n_components(self):
        return len(self.components)

    def reconstruct(self):
        """``sum_i alpha_i f_i`` evaluated at every stored sample."""
        out = np.zeros_like(self.target.values)
        for a, c in zip(self.coefficients, self.components):
            out = out + a * c
        return out

    def replay_error(self):
        return float(np.max(np.linalg.norm(self.reconstruct() - self.target.values, axis=-1)))

    def to_json(self):
        samples = self.target.points.tolist()
        return {
            "kind": self.kind,
            "coefficients": [float(a) for a in self.coefficients],
            "components": [{"samples": samples, "values": c.tolist()} for c in self.components],
            "target": {"samples": samples, "values": self.target.values.tolist(),
                       "edges": self.target.edges.tolist()},
            "errors": {
                "sup_reconstruction_error": self.sup_reconstruction_error,
                "sphere_error": self.sphere_error,
                "shell_min_gauge": self.shell_min_gauge,
                "continuity_modulus": list(self.continuity_modulus),
            },
            "params": self.params,
            "seed": self.seed,
            "notes": list(self.notes),
        }

    @classmethod
    def from_json(cls, data):
        t = data["target"]
        target = SampledMap(np.asarray(t["samples"], float), np.asarray(t["values"], float), t.get("edges"))
        err = data["errors"]
        return cls(
            kind=data["kind"],
            coefficients=np.asarray(data["coefficients"], dtype=float),
            components=[np.asarray(c["values"], dtype=float) for c in data["components"]],
            target=target,
            sup_reconstruction_error=err["sup_reconstruction_error"],
            sphere_error=err["sphere_error"],
            shell_min_gauge=err["shell_min_gauge"],
            continuity_modulus=list(err["continuity_modulus"]),
            params=data.get("params", {}),
            seed=data.get("seed"),
            notes=data.get("notes", []),
        )

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    def write_csv(self, path):
        """One row per (sample, component) pair."""
        pts = self.target.points
        n = self.target.dim
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["sample", "component", "coefficient"]
                       + [f"x{i}" for i in range(pts.shape[1])]
                       + [f"value{i}" for i in range(n)])
            for k in range(len(pts)):
                for j, (a, c) in enumerate(zip(self.coefficients, self.components)):
                    w.writerow([k, j, repr(float(a))]
                               + [repr(float(x)) for x in pts[k]]
                               + [repr(float(x)) for x in c[k]])


def certify(K, kind, coefficients, components, target, params=None, seed=None, notes=()):
    """Measure the errors of a candidate decomposition and wrap it up."""
    coefficients = np.asarray(coefficients, dtype=float)
    components = [np.asarray(c, dtype=float) for c in components]
    if kind == "convex":
        if np.any(coefficients < 0) or abs(coefficients.sum() - 1) > 1e-12:
            raise ValueError("convex certificates need a probability vector")
    recon = np.zeros_like(target.values)
    for a, c in zip(coefficients, components):
        recon = recon + a * c
    sup_err = float(np.max(np.linalg.norm(recon - target.values, axis=-1)))
    gauges = np.concatenate([K.gauge(c) for c in components])
    return DecompositionCertificate(
        kind=kind,
        coefficients=coefficients,
        components=components,
        target=target,
        sup_reconstruction_error=sup_err,
        sphere_error=float(np.max(np.abs(gauges - 1))),
        shell_min_gauge=float(np.min(gauges)),
        continuity_modulus=[target.max_jump(c) for c in components],
        params=dict(params or {}),
        seed=seed,
        notes=list(notes),
    )


def verify_certificate(data, K=None, tol=1e-9):
    """Independent replay of a certificate (a dict or a certificate).

    Returns a dict of named checks with booleans under ``"ok"``.  The body is
    read from ``params["body"]`` when not given.
    """
    cert = data if isinstance(data, DecompositionCertificate) else DecompositionCertificate.from_json(data)
    checks = {}
    replay = cert.replay_error()
    checks["reconstruction"] = {
        "replayed": replay,
        "stored": cert.sup_reconstruction_error,
        "ok": replay <= cert.sup_reconstruction_error + tol,
    }
    if cert.kind == "convex":
        a = cert.coefficients
        checks["convexity"] = {"ok": bool(np.all(a >= 0) and abs(a.sum() - 1) <= 1e-12)}
    if K is None and "body" in cert.params:
        K = body_from_json(cert.params["body"])
    if K is not None:
        g = np.concatenate([K.gauge(c) for c in cert.components])
        err = float(np.max(np.abs(g - 1)))
        checks["sphere"] = {"replayed": err, "stored": cert.sphere_error,
                            "ok": err <= cert.sphere_error + tol}
    checks["ok"] = all(v["ok"] for v in checks.values() if isinstance(v, dict))
    return checks


# ---------------------------------------------------------------- grids


def ball_grid(K, count=10000, spacing=None):
    """Cartesian grid points of ``K`` (at least ``count`` of them).

    Returned as the identity map on the grid; ``edges`` joins axis
    neighbours, which is what continuity moduli are measured over.
    When ``spacing`` is given the grid is the lattice ``spacing * Z^n``
    intersected with ``K`` and ``count`` is ignored.
    """
    n = K.dim
    half = np.array([K.support(np.eye(n)[i])[0] for i in range(n)], dtype=float)
    if spacing is not None:
        axes = [spacing * np.arange(-np.floor(h / spacing), np.floor(h / spacing) + 1) for h in half]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        keep = K.gauge(mesh.reshape(-1, n)).reshape(mesh.shape[:-1]) <= 1
    else:
        k = max(3, int(math.ceil(count ** (1.0 / n))))
    while spacing is None:
        axes = [np.linspace(-h, h, k) for h in half]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        keep = K.gauge(mesh.reshape(-1, n)).reshape(mesh.shape[:-1]) <= 1
        if keep.sum() >= count:
            break
        k += 1
    index = -np.ones(keep.shape, dtype=int)
    index[keep] = np.arange(keep.sum())
    edges = []
    for ax in range(n):
        a = np.moveaxis(index, ax, 0)
        lo, hi = a[:-1].ravel(), a[1:].ravel()
        ok = (lo >= 0) & (hi >= 0)
        edges.append(np.stack([lo[ok], hi[ok]], axis=1))
    pts = mesh[keep]
    return SampledMap(pts, pts.copy(), np.concatenate(edges))


# ---------------------------------------------------------------- three terms


@dataclass(frozen=True)
class ThreeTermParams:
    """Data of the three-term construction for one body.

    ``T v = v / lam - ((1 - lam) / lam) p`` maps the unit ball into ``R U``
    where ``U`` is the gauge ball of radius ``rho`` about ``u0``.
    """

    q: np.ndarray
    phi: np.ndarray
    m: float
    eps: float
    u0: np.ndarray
    rho: float
    R: float
    lam: float
    p: np.ndarray
    resolution: int = 1024
    seed: Optional[int] = None

    @property
    def coefficients(self):
        R, lam = self.R, self.lam
        return np.array([R * (1 - lam), R * lam / 2, R * lam / 2])

    def T(self, v):
        v = np.asarray(v, dtype=float)
        return v / self.lam - ((1 - self.lam) / self.lam) * self.p

    def to_json(self):
        return {
            "q": self.q.tolist(), "phi": self.phi.tolist(), "m": self.m, "eps": self.eps,
            "u0": self.u0.tolist(), "rho": self.rho, "R": self.R, "lambda": self.lam,
            "p": self.p.tolist(), "resolution": self.resolution, "seed": self.seed,
        }

    @classmethod
    def from_json(cls, d):
        a = np.asarray
        return cls(a(d["q"], float), a(d["phi"], float), d["m"], d["eps"], a(d["u0"], float),
                   d["rho"], d["R"], d["lambda"], a(d["p"], float), d.get("resolution", 1024),
                   d.get("seed"))


def _resolution_for(K, length):
    """Sweep resolution whose arc steps are well below ``length``."""
    ratio = K.outradius / K.inradius
    need = 16 * math.pi * K.outradius * ratio / max(length, 1e-300)
    return int(min(65536, max(512, 2 ** math.ceil(math.log2(max(need, 1.0))))))


def _cap_points(K, q, phi, level, count, rng):
    """Boundary points of ``K`` with ``<phi, x> <= level`` near ``q``."""
    qhat = q / np.linalg.norm(q)
    spread = 2.0
    for _ in range(80):
        z = rng.normal(size=(8 * count, K.dim)) * spread
        pts = K.boundary_point(qhat + z)
        pts = pts[pts @ phi <= level]
        if len(pts) >= count:
            return pts[:count]
        spread /= 2
    raise EpsSearchFailed("could not sample the cap around the exposed point")


def _segment_distance(x, a, b):
    ab = b - a
    t = np.clip(((x - a) @ ab) / (ab @ ab), 0.0, 1.0)
    return np.linalg.norm(x - a - t[..., None] * ab, axis=-1)


def _strip_ok(K, v, q, phi, eps, resolution):
    try:
        strip_chord(K, v, q, phi, eps, resolution)
    except (NoStripChord, MultipleStripChords, DegenerateSection):
        return False
    return True


def eps_select(K, q, phi, eps0, n_samples=EPS_SAMPLES, seed=0, max_halvings=MAX_HALVINGS):
    """Largest ``eps0 / 2**k`` for which sampled cap midpoints have unique strip chords.

    For each trial ``eps`` the test points are midpoints of random pairs of
    boundary points in the half strip ``phi <= m + eps/2`` (pairs at least a
    fifth of the cap diameter apart, midpoints strictly inside ``K``).  Each must have exactly one chord in the
    strip ``phi <= m + eps``.
    """
    q = _as_points(q, K.dim)
    phi = _as_points(phi, K.dim)
    m = float(phi @ q)
    rng = np.random.default_rng(seed)
    scale = np.linalg.norm(q)
    for k in range(max_halvings + 1):
        eps = eps0 / 2**k
        cap = _cap_points(K, q, phi, m + eps / 2, 4 * n_samples, rng)
        diam = float(np.max(np.linalg.norm(cap[:, None] - cap[None], axis=-1)))
        if diam <= 0:
            continue
        sep = 0.2 * diam
        resolution = _resolution_for(K, sep)
        mids = []
        while len(mids) < n_samples:
            i, j = rng.integers(len(cap), size=2)
            if np.linalg.norm(cap[i] - cap[j]) < sep:
                continue
            v = (cap[i] + cap[j]) / 2
            # points on the line through q have no section; skip them
            off = np.linalg.norm(v - (v @ q) / (q @ q) * q)
            if off <= 1e-9 * scale:
                continue
            # midpoints of pairs on one flat face lie on the boundary, outside U
            if K.gauge(v) >= 1 - 1e-6:
                continue
            mids.append(v)
        if all(_strip_ok(K, v, q, phi, eps, resolution) for v in mids):
            return float(eps)
    raise EpsSearchFailed(f"no strip width passed after {max_halvings} halvings")


def _rotate_in_plane(q, eta):
    """Rotate ``q`` by ``eta`` in the plane spanned by ``q`` and a coordinate axis."""
    j = int(np.argmin(np.abs(q)))
    e = np.zeros_like(q)
    e[j] = 1.0
    qn = np.linalg.norm(q)
    qhat = q / qn
    w = e - (e @ qhat) * qhat
    w /= np.linalg.norm(w)
    return math.cos(eta) * q + math.sin(eta) * qn * w


def check_params(K, params, n_boundary=1000, n_interior=0, seed=0):
    """Verify the invariants of ``params``; returns a dict of margins and flags.

    ``containment`` is ``max gauge(T x / R - u0) - rho`` over boundary
    samples ``x`` and must be ``<= 0``.  ``segment_gap`` is the smallest
    Euclidean distance from sampled points of ``U`` to ``[q, -q]``.  With
    ``n_interior > 0`` random points of ``U`` are also checked to have a
    unique strip chord.
    """
    P = params
    g0 = float(K.gauge(P.u0))
    out = {"gauge_u0": g0, "lambda": P.lam}
    out["gauge_p_error"] = abs(float(K.gauge(P.p)) - P.R)
    xs = K.boundary_samples(n_boundary)
    out["containment"] = float(np.max(K.gauge(P.T(xs) / P.R - P.u0)) - P.rho)
    ring = P.u0 + P.rho * K.boundary_samples(256)
    out["segment_gap"] = float(np.min(_segment_distance(ring, P.q, -P.q)))
    out["cap_margin"] = float(P.m + P.eps / 2 - np.max(ring @ P.phi))
    ok = (g0 < 1 and 0 < P.lam < 1 and out["gauge_p_error"] <= 1e-9 * max(1.0, P.R)
          and out["containment"] <= 0 and out["segment_gap"] > 0 and out["cap_margin"] >= 0)
    if ok and n_interior:
        rng = np.random.default_rng(seed)
        d = rng.normal(size=(n_interior, K.dim))
        r = rng.uniform(size=n_interior) ** (1.0 / K.dim)
        pts = P.u0 + P.rho * K.boundary_point(d) * r[:, None]
        pts = np.vstack([pts, ring[::8]])
        bad = [i for i, v in enumerate(pts) if not _strip_ok(K, v, P.q, P.phi, P.eps, P.resolution)]
        out["strip_failures"] = len(bad)
        ok = not bad
    out["ok"] = bool(ok)
    return out


def _best_center(K, q, phi, m, eps):
    """Grid search over ``(eps2, eta)`` maximising the admissible radius."""
    h = float(K.support(phi)[0])
    R_out = K.outradius
    best = (0.0, None, None)
    for eps2 in 2.0 ** -np.arange(1, 11):
        for eta in 2.0 ** -np.arange(0, 13):
            u0 = (1 - eps2) * _rotate_in_plane(q, eta)
            g0 = float(K.gauge(u0))
            if not 0 < g0 < 1:
                continue
            gap = float(_segment_distance(u0, q, -q))
            # sup of phi over the gauge ball about u0 is phi(u0) + rho h
            cap = (m + eps / 2 - float(phi @ u0)) / h
            rho = min(gap / (2 * R_out), 0.9 * cap, 0.5 * (1 - g0))
            if rho > best[0]:
                best = (rho, u0, (float(eps2), float(eta)))
    return best


def three_term_params(K, seed=0, n_check=64):
    """Search for valid :class:`ThreeTermParams`, retrying over 32 seeds."""
    if K.dim < 2:
        raise ParamSearchFailed("needs dimension at least 2")
    for attempt in range(PARAM_SEEDS):
        s = seed + attempt
        rng = np.random.default_rng(s)
        phi = q = None
        for _ in range(32):
            cand = rng.normal(size=K.dim)
            cand /= np.linalg.norm(cand)
            try:
                q, m = exposed_point(K, cand)
            except NonExposedDirection:
                continue
            phi = cand
            break
        if phi is None:
            continue
        h = float(K.support(phi)[0])
        try:
            eps = eps_select(K, q, phi, 0.5 * h, seed=s)
        except EpsSearchFailed:
            continue
        rho, u0, _ = _best_center(K, q, phi, m, eps)
        if u0 is None or rho <= 1e-9:
            continue
        g0 = float(K.gauge(u0))
        for _ in range(4):
            lam = 1 / (1 + g0)
            R = float(math.ceil((1 + g0) / rho * SAFETY))
            p = -R * u0 / g0
            # chords bisected in U are at least (1 - g0) inradius long
            resolution = _resolution_for(K, (1 - g0 - rho) * K.inradius)
            params = ThreeTermParams(q, phi, float(m), eps, u0, float(rho), R, lam, p, resolution, s)
            if check_params(K, params, n_interior=n_check, seed=s)["ok"]:
                return params
            rho /= 2
    raise ParamSearchFailed(f"no valid parameters after {PARAM_SEEDS} seeds")


def decompose_three(K, params, domain=None):
    """Three sphere-valued terms reproducing the identity on ``domain``.

    ``domain`` defaults to :func:`ball_grid` with 10^4 points; its values
    must be the identity.  Components are the constant ``p / R`` and the two
    strip-chord endpoints at ``T v / R``.
    """
    P = params
    if domain is None:
        domain = ball_grid(K, 10000)
    V = domain.values
    W = P.T(V) / P.R
    f1 = np.tile(P.p / P.R, (len(V), 1))
    f2 = np.empty_like(V)
    f3 = np.empty_like(V)
    for i, w in enumerate(W):
        c = strip_chord(K, w, P.q, P.phi, P.eps, P.resolution)
        f2[i] = c.p1
        f3[i] = c.p2
    info = P.to_json()
    info["body"] = K.to_json()
    return certify(K, "span", P.coefficients, [f1, f2, f3], domain, info, P.seed)


# ---------------------------------------------------------------- planar pieces


def decompose_two_disk(f, r=1e-9):
    """Average of the two chord endpoints of the unit circle at each value."""
    from .body import disk

    norms = np.linalg.norm(f.values, axis=-1)
    if np.any(norms < r):
        bad = np.flatnonzero(norms < r)
        raise VanishingValue(f"{len(bad)} samples have |f| < {r}, first at index {bad[0]}")
    c1, c2 = disk_chord_batch(f.values)
    K = disk()
    return certify(K, "convex", [0.5, 0.5], [c1, c2], f, {"r": r, "body": K.to_json()})


def decompose_four_extreme(K2, f):
    """``f = k u0 + (s/2) c1 + (s/2) c2`` with sphere-valued ``u0, c1, c2``.

    ``k = sup gauge(f) + 1`` keeps ``g = f - k u0`` away from the origin and
    the chord map of ``g / s`` (``s = sup gauge(g)``) splits it into two
    boundary points.
    """
    u0 = K2.boundary_point(np.array([1.0, 0.0]))
    k = float(np.max(K2.gauge(f.values))) + 1
    g = f.values - k * u0
    s = float(np.max(K2.gauge(g)))
    c1, c2 = chord_map_batch(K2, g / s)
    comps = [np.tile(u0, (len(f), 1)), c1, c2]
    note = "3 components; certified bound is 4 extreme points"
    return certify(K2, "span", [k, s / 2, s / 2], comps, f,
                   {"k": k, "s": s, "u0": u0.tolist(), "body": K2.to_json()}, notes=[note])


def _candidate_directions(K, count, rng):
    if K.dim == 2:
        a = rng.uniform(0, 2 * np.pi) + 2 * np.pi * np.arange(count) / count
        d = np.stack([np.cos(a), np.sin(a)], -1)
    else:
        from .body import unit_directions

        Q, _ = np.linalg.qr(rng.normal(size=(K.dim, K.dim)))
        d = unit_directions(K.dim, count) @ Q.T
    return K.boundary_point(d)


def two_nonvanishing_average(K, f, seed=0, w=None, delta0=None):
    """``f = (g1 + g2) / 2`` with ``g_{1,2} = f +- delta0 (1 - gauge f) w`` nonvanishing.

    Searches unit-gauge directions ``w`` and ``delta0`` in a seeded grid and
    keeps the candidate whose smallest component gauge is largest.
    """
    gf = K.gauge(f.values)
    if np.any(gf > 1 + 1e-12):
        raise ValueError("f must take values in the unit ball")
    slack = np.clip(1 - gf, 0.0, None)[:, None]
    rng = np.random.default_rng(seed)
    ws = _candidate_directions(K, 16 if K.dim == 2 else 32, rng) if w is None else K.boundary_point(np.atleast_2d(w))
    ds = (0.5, 0.25, 0.75, 1.0) if delta0 is None else (float(delta0),)
    best = None
    for wi in ws:
        for d0 in ds:
            g1 = f.values + d0 * slack * wi
            g2 = f.values - d0 * slack * wi
            lo = np.minimum(K.gauge(g1), K.gauge(g2))
            score = float(lo.min())
            if best is None or score > best[0]:
                best = (score, wi, d0, g1, g2, lo)
    score, wi, d0, g1, g2, lo = best
    hi = max(K.gauge(g1).max(), K.gauge(g2).max())
    if score <= 1e-6 or hi > 1 + 1e-12:
        raise SearchFailed(f"best candidate has min gauge {score:.3g}",
                           obstructing=np.flatnonzero(lo <= 1e-6))
    params = {"w": wi.tolist(), "delta0": d0, "body": K.to_json()}
    cert = certify(K, "convex", [0.5, 0.5], [g1, g2], f, params, seed)
    # these components live in the ball, not on the sphere
    return cert


def shell_convex_decomposition(K2, f, r=0.5, seed=0):
    """Four sphere-valued terms with weights 1/4 reproducing the path ``f``."""
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    avg = two_nonvanishing_average(K2, f, seed)
    g1, g2 = avg.components
    a1, a2 = chord_map_batch(K2, g1)
    b1, b2 = chord_map_batch(K2, g2)
    params = dict(avg.params, r=r)
    cert = certify(K2, "convex", [0.25] * 4, [a1, a2, b1, b2], f, params, seed)
    if cert.shell_min_gauge < r:
        raise SphereSpanError(f"components reach gauge {cert.shell_min_gauge} < r")
    return cert


__all__ = [
    "DecompositionCertificate", "ThreeTermParams", "ball_grid", "certify", "check_params",
    "decompose_four_extreme", "decompose_three", "decompose_two_disk", "eps_select",
    "shell_convex_decomposition", "three_term_params", "two_nonvanishing_average",
    "verify_certificate",
]
