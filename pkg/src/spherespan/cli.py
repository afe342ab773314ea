"""Command-line interface.

Every subcommand reads a body description (``--body``, a JSON file or an
inline JSON string), writes a JSON report to ``--out`` (or stdout) and,
where it makes sense, a CSV to ``--csv``.  Exit codes: 0 on success, 2 when
a mathematical refutation is emitted, 1 on error.
"""

import argparse
import json
import sys

import numpy as np

from . import body as B
from . import decompose as D
from . import degree as G
from . import obstruct as O
from . import section as S
from .errors import SphereSpanError
from .maps import SampledMap, SphereMapSamples, interval_map

EXIT_OK, EXIT_ERROR, EXIT_REFUTED = 0, 1, 2


class CLIError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def dumps(obj):
    return json.dumps(obj, sort_keys=True, default=_jsonable)


def _read_json(text, flag):
    text = text.strip()
    try:
        if text.startswith("{") or text.startswith("["):
            return json.loads(text)
        with open(text) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CLIError(f"{flag}: cannot read {text!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CLIError(f"{flag}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _body(args):
    if not args.body:
        raise CLIError("--body is required")
    return B.body_from_json(_read_json(args.body, "--body"))


def _vector(text, flag):
    try:
        return np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise CLIError(f"{flag}: expected comma-separated numbers, got {text!r}") from None


def _vectors(text, flag):
    return np.array([_vector(part, flag) for part in text.split(";")])


def _emit(args, obj):
    text = dumps(obj)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------- commands


def cmd_gauge(args):
    K = _body(args)
    if not args.point:
        raise CLIError("--point is required")
    g = B.gauge(K, _vector(args.point, "--point"))
    print(repr(g))
    if args.out:
        _emit(args, {"gauge": g})
    return EXIT_OK


def cmd_chord(args):
    K = _body(args)
    if not args.point:
        raise CLIError("--point is required")
    v = _vector(args.point, "--point")
    if K.dim != 2:
        raise CLIError("--body: chord works on planar bodies")
    chords = S.bisected_chords_2d(K, v, args.resolution or 4096)
    out = {"midpoint": v, "chords": [c.to_json() for c in chords], "count": len(chords)}
    if K.strictly_convex:
        out["chord_map"] = S.chord_map(K, v).to_json()
    if args.csv:
        S.write_chords_csv(args.csv, chords)
    _emit(args, out)
    return EXIT_OK


def _certificate_out(args, cert):
    if args.csv:
        cert.write_csv(args.csv)
    _emit(args, cert.to_json())
    return EXIT_OK


def cmd_decompose3(args):
    K = _body(args)
    params = D.three_term_params(K, seed=args.seed)
    cert = D.decompose_three(K, params, D.ball_grid(K, args.grid or 10000))
    return _certificate_out(args, cert)


def cmd_decompose4(args):
    K = _body(args)
    f = _load_map(args) if args.map else D.ball_grid(K, args.grid or 10000)
    return _certificate_out(args, D.decompose_four_extreme(K, f))


def _load_map(args):
    data = _read_json(args.map, "--map")
    try:
        return SampledMap.from_json(data)
    except ValueError as exc:
        raise CLIError(f"--map: {exc}") from None


def random_path(K, rng, knots=8, samples=400):
    """Seeded piecewise-linear path through random points of ``K``."""
    pts = K.random_points(rng, knots)
    t = np.linspace(0, 1, samples)
    s = np.linspace(0, 1, knots)
    vals = np.stack([np.interp(t, s, pts[:, i]) for i in range(K.dim)], -1)
    return interval_map(vals, t)


def cmd_decompose_path(args):
    K = _body(args)
    f = _load_map(args) if args.map else random_path(K, np.random.default_rng(args.seed), samples=args.grid or 400)
    if args.mode == "average":
        cert = D.two_nonvanishing_average(K, f, seed=args.seed)
    else:
        cert = D.shell_convex_decomposition(K, f, r=args.r, seed=args.seed)
    return _certificate_out(args, cert)


def cmd_degree(args):
    if not args.map:
        raise CLIError("--map is required")
    data = _read_json(args.map, "--map")
    try:
        f = SphereMapSamples.from_json(data)
    except ValueError as exc:
        raise CLIError(f"--map: {exc}") from None
    d = G.degree(f, seed=args.seed) if f.dim == 3 else G.winding_number(f)
    print(d)
    if args.out:
        _emit(args, {"degree": d})
    return EXIT_OK


def cmd_theta(args):
    K = _body(args)
    if args.uradius is None:
        raise CLIError("--uradius is required")
    tb = O.theta_bound(K, args.uradius, args.samples or 2000, args.resolution or 4000)
    if args.csv:
        tb.write_csv(args.csv)
    _emit(args, tb.to_json())
    return EXIT_OK


def cmd_witness(args):
    K = _body(args)
    sections = O.heuristic_sections(K, args.resolution or 4096)
    if args.section:
        sections = [s for s in sections if s[0] == args.section]
        if not sections:
            raise CLIError(f"--section: unknown section {args.section!r}")
    radius = args.uradius if args.uradius is not None else K.inradius / 10
    reports = {name: O.discontinuity_witness(K, s, radius, grid=args.grid or 256).to_json()
               for name, s in sections}
    _emit(args, {"U_radius": radius, "sections": reports,
                 "all_found": all(r["found"] for r in reports.values())})
    return EXIT_OK


def cmd_refute(args):
    if args.candidate:
        K = _body(args)
        data = _read_json(args.candidate, "--candidate")
        try:
            comps = [SampledMap.from_json(c) for c in data["components"]]
            lambdas = data["lambdas"]
        except (KeyError, ValueError) as exc:
            raise CLIError(f"--candidate: missing or invalid field {exc}") from None
        cases = [(K, comps, lambdas, {"body": K.to_json()})]
    else:
        cases = O.adversarial_candidates(args.count, seed=args.seed)
    results = []
    refuted = 0
    for K, comps, lambdas, info in cases:
        r = O.convex_decomposition_refuter(K, comps, lambdas, tol=args.tol or 1e-6)
        out = r.to_json()
        if not args.full:
            out.pop("components", None)
            out.pop("samples", None)
        out["candidate"] = info
        refuted += isinstance(r, O.ContradictionCertificate)
        results.append(out)
    _emit(args, {"results": results, "certificates": refuted, "candidates": len(results)})
    return EXIT_REFUTED if refuted else EXIT_OK


def cmd_approx(args):
    K = _body(args)
    m = args.m or 64
    P = B.polytope_approx(K, m)
    rep = B.hausdorff_report(P, K, args.resolution or 4096)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(",".join("xyz"[:K.dim]) + "\n")
            for v in P.vertices:
                fh.write(",".join(repr(float(x)) for x in v) + "\n")
    _emit(args, {"m": m, "vertices": P.vertices, "hausdorff": rep})
    return EXIT_OK


def cmd_face_check(args):
    K = _body(args)
    if not (args.point and args.components and args.lambdas):
        raise CLIError("--point, --components and --lambdas are required")
    rep = O.face_containment_check(K, _vector(args.point, "--point"),
                                   _vectors(args.components, "--components"),
                                   _vector(args.lambdas, "--lambdas"), tol=args.tol or 1e-6)
    _emit(args, rep)
    return EXIT_OK if rep["passed"] else EXIT_REFUTED


def cmd_verify(args):
    if not args.cert:
        raise CLIError("--cert is required")
    data = _read_json(args.cert, "--cert")
    K = _body(args) if args.body else None
    try:
        checks = D.verify_certificate(data, K, tol=args.tol or 1e-9)
    except KeyError as exc:
        raise CLIError(f"--cert: missing field {exc}") from None
    _emit(args, checks)
    return EXIT_OK if checks["ok"] else EXIT_ERROR


# ---------------------------------------------------------------- parser

CSV_HELP = {
    "chord": "CSV columns: p1_x,p1_y,p2_x,p2_y (one chord per row).",
    "decompose3": "CSV columns: sample,component,coefficient,x0..,value0.. (one row per sample and component).",
    "decompose4": "CSV columns: sample,component,coefficient,x0..,value0.. (one row per sample and component).",
    "decompose-path": "CSV columns: sample,component,coefficient,x0,value0.. (one row per sample and component).",
    "theta": "CSV columns: p_x,p_y,angle (smallest chord angle at each midpoint).",
    "approx": "CSV columns: x,y[,z] (one polytope vertex per row).",
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spherespan",
        description="Decompose ball-valued maps into sphere-valued ones and certify the obstructions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text, epilog=CSV_HELP.get(name))
        p.set_defaults(func=func)
        p.add_argument("--body", help="body JSON file or inline JSON, e.g. '{\"kind\":\"lp\",\"p\":4}'")
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--csv", help="optional CSV export")
        p.add_argument("--tol", type=_positive, help="tolerance override")
        p.add_argument("--resolution", type=_positive_int, help="boundary sweep resolution")
        p.add_argument("--grid", type=_positive_int, help="grid size (samples or ring angles)")
        return p

    p = add("gauge", cmd_gauge, "Gauge of a point.")
    p.add_argument("--point", help="comma-separated coordinates")
    p = add("chord", cmd_chord, "All chords bisected by a point of a planar body.")
    p.add_argument("--point", help="comma-separated midpoint")
    add("decompose3", cmd_decompose3, "Three-term span decomposition of the identity on a grid.")
    p = add("decompose4", cmd_decompose4, "Decomposition into at most four extreme-point-valued maps.")
    p.add_argument("--map", help="sampled map JSON {samples, values}; identity grid if omitted")
    p = add("decompose-path", cmd_decompose_path, "Convex decomposition of a sampled path.")
    p.add_argument("--map", help="path JSON {samples, values}; a seeded random path if omitted")
    p.add_argument("--r", type=float, default=0.5, help="shell radius in (0, 1)")
    p.add_argument("--mode", choices=("shell", "average"), default="shell")
    p = add("degree", cmd_degree, "Degree of a sampled boundary self-map; prints the integer.")
    p.add_argument("--map", help="JSON {domain, image} or {vertices, faces, image}")
    p = add("theta", cmd_theta, "Angle lower bound for chords bisected near the origin.")
    p.add_argument("--uradius", type=_positive, help="gauge radius of the neighbourhood")
    p.add_argument("--samples", type=_positive_int, help="midpoint samples (default 2000)")
    p = add("witness", cmd_witness, "Discontinuity witnesses for the built-in heuristic sections.")
    p.add_argument("--uradius", type=_positive, help="starting gauge radius (default inradius/10)")
    p.add_argument("--section", help="run only the named heuristic")
    p = add("refute", cmd_refute, "Refute claimed convex decompositions (exit 2 when a certificate is emitted).")
    p.add_argument("--candidate", help="JSON {components: [{samples, values}], lambdas}")
    p.add_argument("--count", type=_positive_int, default=50, help="generated candidates when no file is given")
    p.add_argument("--full", action="store_true", help="include sampled components in certificates")
    p = add("approx", cmd_approx, "Inscribed polytope and its Hausdorff distance to the body.")
    p.add_argument("--m", type=_positive_int, help="vertex count (default 64)")
    p = add("face-check", cmd_face_check, "Support-hyperplane containment of a convex combination.")
    p.add_argument("--point", help="boundary point")
    p.add_argument("--components", help="semicolon-separated points, e.g. '1,1;1,-1'")
    p.add_argument("--lambdas", help="comma-separated weights")
    p = add("verify", cmd_verify, "Replay the checks stored in a decomposition certificate.")
    p.add_argument("--cert", help="certificate JSON")
    return parser


def _positive(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return x


def _positive_int(text):
    x = int(text)
    if x <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return x


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CLIError, SphereSpanError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except BrokenPipeError:
        sys.stderr.close()
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
