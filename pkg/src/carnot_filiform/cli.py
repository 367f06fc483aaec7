"""Command line entry point: carnot-filiform <subcommand> [flags].

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 the
optimizer could not reach the endpoint tolerance.  Reports are byte-stable
for a fixed seed and configuration; wall-clock timings appear only behind
--timings, and figures only behind --figures DIR.
"""

from __future__ import annotations

import argparse
import json
import os
import shlex
import sys
from fractions import Fraction

from .algebra import AlgebraError, Element
from .bch import bch_coefficients, group_product
from .distortion import distortion_sample
from .forms import horizontal_lift, morera_defect
from .maps import MapError, Rejection, apply_map
from .metric import (InfeasiblePathError, carnot_distance_upper,
                     homogeneous_distance)
from .pansu import pansu_differential_estimate
from .piecewise import PiecewiseError
from .scalars import format_rational, parse_rational
from .serialize import (SerializeError, canonical_dumps, curve_from_json,
                        curve_vertices_from_json, element_from_json,
                        element_to_json, gpoly_from_json, load_algebra,
                        map_from_json, path_to_json, scalar_to_json,
                        write_distortion_csv)
from .verify import SUITES, run_suite

USAGE_ERRORS = (SerializeError, MapError, AlgebraError, PiecewiseError,
                ValueError, OSError, KeyError)


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SerializeError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SerializeError(f"{path}: invalid JSON: {exc}") from exc


def _resolve_algebra(args, fallback_label=None):
    if args.algebra:
        return load_algebra(args.algebra)
    if fallback_label:
        return load_algebra(fallback_label)
    raise SerializeError("no algebra given: pass --algebra LABEL|FILE")


def _read_element(path: str, args, alg=None) -> Element:
    obj = _load_json(path)
    if alg is None:
        alg = (load_algebra(args.algebra) if args.algebra
               else _resolve_algebra(args, obj.get("algebra_label")))
    return element_from_json(obj, alg)


def _parse_point(text: str, args, alg=None) -> Element:
    """Inline comma-separated rationals, or a path to an element file."""
    if os.path.exists(text):
        return _read_element(text, args, alg)
    if alg is None:
        alg = _resolve_algebra(args)
    coords = [parse_rational(c) for c in text.split(",")]
    if len(coords) != alg.dim:
        raise SerializeError(f"{alg.label} needs {alg.dim} coordinates, "
                             f"got {len(coords)}")
    return Element(alg, tuple(coords))


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _element_csv(X: Element) -> str:
    return ",".join(str(scalar_to_json(c)) for c in X.coords) + "\n"


def _emit_element(args, X: Element) -> None:
    if args.format == "csv":
        _emit(args, _element_csv(X))
    else:
        _emit(args, canonical_dumps(element_to_json(X)))


# === subcommand handlers ================================================

def _cmd_mul(args) -> int:
    x = _read_element(args.x, args)
    y = _read_element(args.y, args, alg=x.algebra)
    _emit_element(args, group_product(x.algebra, x, y))
    return 0


def _cmd_bch_coeffs(args) -> int:
    if args.n < 3:
        raise SerializeError("--n must be at least 3")
    coeffs = bch_coefficients(args.n)
    if args.format == "csv":
        lines = ["j,c"] + [f"{j},{format_rational(c)}"
                           for j, c in sorted(coeffs.items())]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, canonical_dumps(
            {"n": args.n,
             "coefficients": {str(j): format_rational(c)
                              for j, c in sorted(coeffs.items())}}))
    return 0


def _cmd_dist(args) -> int:
    p = _parse_point(args.p, args)
    q = _parse_point(args.q, args, alg=p.algebra)
    alg = p.algebra
    if args.metric == "homogeneous":
        payload = {"metric": "homogeneous",
                   "value": homogeneous_distance(alg, p, q)}
    else:
        res = carnot_distance_upper(alg, p, q, segments=args.segments,
                                    starts=args.starts, seed=args.seed)
        payload = {"metric": "carnot-upper", "value": res.value,
                   "endpoint_defect": res.defect,
                   "chosen_start": res.chosen_start,
                   "path": path_to_json(res.path)}
    if args.format == "csv":
        _emit(args, f"metric,value\n{payload['metric']},{payload['value']!r}\n")
    else:
        _emit(args, canonical_dumps(payload))
    return 0


def _trace_csv(path_result) -> str:
    pts = path_result.path.points()
    dim = path_result.path.algebra.dim
    lines = ["segment," + ",".join(f"x_{i + 1}" for i in range(dim))]
    for k, pt in enumerate(pts):
        lines.append(f"{k}," + ",".join(repr(float(c)) for c in pt.coords))
    return "\n".join(lines) + "\n"


def _cmd_geodesic(args) -> int:
    p = _parse_point(args.p, args)
    q = _parse_point(args.q, args, alg=p.algebra)
    res = carnot_distance_upper(p.algebra, p, q, segments=args.segments,
                                starts=args.starts, seed=args.seed)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(_trace_csv(res))
    if args.figures:
        from .figures import render_geodesic
        render_geodesic(res, args.figures)
    if args.format == "csv":
        _emit(args, _trace_csv(res))
    else:
        _emit(args, canonical_dumps(path_to_json(res.path)))
    return 0


def _cmd_apply_map(args) -> int:
    p = _read_element(args.p, args)
    word = map_from_json(_load_json(args.map), p.algebra)
    _emit_element(args, apply_map(p.algebra, word, p))
    return 0


def _matrix_json(matrix):
    return [[scalar_to_json(v) for v in row] for row in matrix]


def _cmd_pansu(args) -> int:
    p = _parse_point(args.p, args)
    alg = p.algebra
    word = map_from_json(_load_json(args.map), alg)
    scales = None
    if args.scales:
        scales = [parse_rational(s) for s in args.scales.split(",")]
    est = pansu_differential_estimate(alg, word, p, scales=scales)
    if isinstance(est.classification, Rejection):
        classification = {"rejected": est.classification.condition,
                          "detail": est.classification.detail}
    elif est.classification is None:
        classification = None
    else:
        cp = est.classification
        classification = {"a1": str(cp.a1), "a2": str(cp.a2), "b": str(cp.b),
                          "tau": cp.conjugated}
    payload = {"base_point": element_to_json(p),
               "scales": [format_rational(s) for s in est.scales],
               "matrix": None if est.matrix is None
               else _matrix_json(est.matrix),
               "residuals": [list(r) for r in est.residuals],
               "flags": list(est.flags),
               "classification": classification}
    if args.figures:
        from .figures import render_pansu
        render_pansu(est, args.figures)
    if args.format == "csv" and est.matrix is not None:
        lines = [",".join(str(scalar_to_json(v)) for v in row)
                 for row in est.matrix]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, canonical_dumps(payload))
    return 0


def _cmd_distortion(args) -> int:
    alg = _resolve_algebra(args)
    word = map_from_json(_load_json(args.map), alg)
    stats = distortion_sample(alg, word, args.n, seed=args.seed,
                              sampler=args.sampler,
                              keep_rows=bool(args.csv))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            write_distortion_csv(fh, stats.rows)
    if args.figures:
        from .figures import render_distortion
        render_distortion(stats, args.figures)
    payload = {"samples": stats.count,
               "sampler": stats.sampler,
               "seed": stats.seed,
               "min_ratio": stats.min_ratio,
               "max_ratio": stats.max_ratio,
               "first_block": stats.first_block,
               "first_block_min": stats.first_block_min,
               "first_block_max": stats.first_block_max,
               "calibrated_bound": stats.calibrated_bound,
               "exact_similarity": None if stats.exact_similarity is None
               else format_rational(stats.exact_similarity),
               "histogram": list(stats.histogram)}
    if args.format == "csv":
        lines = ["key,value"] + [f"{k},{v}" for k, v in payload.items()
                                 if k != "histogram"]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, canonical_dumps(payload))
    return 0


def _cmd_lift(args) -> int:
    alg = _resolve_algebra(args)
    curve = curve_from_json(_load_json(args.curve), alg)
    start = None
    if args.start:
        start = [parse_rational(c) for c in args.start.split(",")]
    lift = horizontal_lift(alg, curve, start_center=start)
    if args.figures:
        from .figures import render_lift
        render_lift(lift, args.figures)
    if args.format == "csv":
        lines = ["vertex," + ",".join(
            f"z_{i + 1}" for i in range(len(lift.centers[0])))]
        for k, z in enumerate(lift.centers):
            lines.append(f"{k}," + ",".join(str(scalar_to_json(c))
                                            for c in z))
        _emit(args, "\n".join(lines) + "\n")
    else:
        payload = {"centers": [[scalar_to_json(c) for c in z]
                               for z in lift.centers],
                   "defect": element_to_json(lift.defect)}
        _emit(args, canonical_dumps(payload))
    return 0


def _cmd_alpha(args) -> int:
    alg = _resolve_algebra(args)
    curve = curve_from_json(_load_json(args.curve), alg)
    from .forms import alpha_integral
    _emit_element(args, alpha_integral(alg, curve))
    return 0


def _cmd_morera(args) -> int:
    g = gpoly_from_json(_load_json(args.g))
    closed, vertices = curve_vertices_from_json(_load_json(args.curve))
    if not closed:
        raise SerializeError("morera needs a closed curve")
    value = morera_defect(g, vertices)
    if args.format == "csv":
        _emit(args, f"re,im\n{format_rational(value.re)},"
                    f"{format_rational(value.im)}\n")
    else:
        _emit(args, canonical_dumps(
            {"value": [format_rational(value.re), format_rational(value.im)],
             "pretty": str(value)}))
    return 0


def _cmd_verify(args) -> int:
    report = run_suite(args.suite, seed=args.seed, timings=args.timings,
                       invocation="carnot-filiform " +
                       shlex.join(sys.argv[1:]))
    if args.figures:
        from .figures import render_report
        render_report(report, args.figures)
    if args.format == "csv":
        text = ("suite,cases,failures,elapsed,seed\n"
                f"{report.suite},{report.cases},{len(report.failures)},"
                f"{report.elapsed!r},{report.seed}\n")
        _emit(args, text)
    else:
        _emit(args, canonical_dumps(report.to_json()))
    return 0 if report.ok else 1


# === parser =============================================================

def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--algebra", default=argparse.SUPPRESS,
                   help="algebra label (fr2..fr9, fc2.., hc1..) or a JSON file")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                   help="master seed for anything randomized (default 0)")
    g.add_argument("--out", default=argparse.SUPPRESS,
                   help="write the primary output here instead of stdout")
    g.add_argument("--format", choices=("json", "csv"),
                   default=argparse.SUPPRESS, help="output format")
    g.add_argument("--figures", default=argparse.SUPPRESS, metavar="DIR",
                   help="render matplotlib figures into DIR")
    g.add_argument("--timings", action="store_true",
                   default=argparse.SUPPRESS,
                   help="report wall-clock times instead of 0.0")
    return common


# Global flags keep SUPPRESS defaults so they can sit on either side of the
# subcommand: the subparser reparses into a fresh namespace, and a flag with
# a real default there would clobber one parsed by the top parser.  The real
# defaults are filled in after parsing.
GLOBAL_DEFAULTS = {"algebra": None, "seed": 0, "out": None, "format": "json",
                   "figures": None, "timings": False}


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    top = argparse.ArgumentParser(
        prog="carnot-filiform",
        parents=[common],
        description="Exact filiform / complex Heisenberg group computations "
                    "and verification suites.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mul", parents=[common],
                       help="group product of two element files")
    p.add_argument("x")
    p.add_argument("y")
    p.set_defaults(fn=_cmd_mul)

    p = sub.add_parser("bch-coeffs", parents=[common],
                       help="tail coefficients c_2..c_{n-1}")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=_cmd_bch_coeffs)

    p = sub.add_parser("dist", parents=[common],
                       help="distance between two element files")
    p.add_argument("--metric", choices=("homogeneous", "carnot-upper"),
                   default="homogeneous")
    p.add_argument("--segments", type=int, default=64)
    p.add_argument("--starts", type=int, default=4)
    p.add_argument("p")
    p.add_argument("q")
    p.set_defaults(fn=_cmd_dist)

    p = sub.add_parser("geodesic", parents=[common],
                       help="optimize a horizontal path between two elements")
    p.add_argument("--segments", type=int, default=64)
    p.add_argument("--starts", type=int, default=4)
    p.add_argument("--trace", help="also write the lifted-curve CSV here")
    p.add_argument("p")
    p.add_argument("q")
    p.set_defaults(fn=_cmd_geodesic)

    p = sub.add_parser("apply-map", parents=[common],
                       help="apply a composition word to an element")
    p.add_argument("--map", required=True)
    p.add_argument("p")
    p.set_defaults(fn=_cmd_apply_map)

    p = sub.add_parser("pansu", parents=[common],
                       help="numerical scaled differential of a map word")
    p.add_argument("--map", required=True)
    p.add_argument("--p", required=True,
                   help="base point: element file or inline rationals")
    p.add_argument("--scales", help="comma-separated rational scales")
    p.set_defaults(fn=_cmd_pansu)

    p = sub.add_parser("distortion", parents=[common],
                       help="sample metric distortion ratios of a map word")
    p.add_argument("--map", required=True)
    p.add_argument("--n", type=int, default=100000)
    p.add_argument("--sampler", choices=("scale-sweep", "box"),
                   default="scale-sweep")
    p.add_argument("--csv", help="write per-sample rows to this file")
    p.set_defaults(fn=_cmd_distortion)

    p = sub.add_parser("lift", parents=[common],
                       help="horizontal lift of a first-layer polyline")
    p.add_argument("--curve", required=True)
    p.add_argument("--start", help="second-layer start center, "
                                   "comma-separated rationals")
    p.set_defaults(fn=_cmd_lift)

    p = sub.add_parser("alpha", parents=[common],
                       help="contour integral of the bracket one-form")
    p.add_argument("--curve", required=True)
    p.set_defaults(fn=_cmd_alpha)

    p = sub.add_parser("morera", parents=[common],
                       help="contour integral of g(w, conj w) dw")
    p.add_argument("--g", required=True)
    p.add_argument("--curve", required=True)
    p.set_defaults(fn=_cmd_morera)

    p = sub.add_parser("verify", parents=[common],
                       help="run a bundled verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.set_defaults(fn=_cmd_verify)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return args.fn(args)
    except InfeasiblePathError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
