"""Command-line front end.

Instances and results are JSON records. An instance is
``{"dim": d, "points": [[x_1, ..., x_d], ...]}``; every result record echoes
the tool version and the configuration that produced it. Exit codes:

0  success
1  certified failure (e.g. the ball is not contained; a witness is reported)
2  usage error or malformed input
3  internal verification failure, which signals a bug
"""

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .center import WeightedSystem, solve_center, verify_zero_sum
from .errors import (
    BallNotContained,
    GeometryError,
    InclusionViolated,
    NoConvergence,
    TargetNotInHull,
    TooFewPoints,
    UnboundedPolytope,
    VerificationFailed,
)
from .geom import Tolerance
from .macbeath import find_macbeath_point
from .oracle import (
    exhaustive_best_subset,
    generate_grundbacher,
    generate_random_ball_instance,
    grundbacher_bound,
)
from .polarity import certify_ball_in_hull
from .selection import select_corollary14, select_steinitz

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

_CERTIFIED_FAILURES = (BallNotContained, TargetNotInHull, TooFewPoints, UnboundedPolytope)
_INTERNAL = (VerificationFailed, InclusionViolated, NoConvergence)


class UsageError(Exception):
    reason = "usage"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def load_instance(path):
    try:
        with open(path, encoding="utf-8") as fh:
            rec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read instance {path}: {exc}")
    try:
        dim = int(rec["dim"])
        pts = np.array(rec["points"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed instance: {exc}")
    if dim < 1 or pts.ndim != 2 or pts.shape[1] != dim or len(pts) == 0:
        raise UsageError(f"points must be a non-empty list of length-{dim} arrays")
    if not np.all(np.isfinite(pts)):
        raise UsageError("coordinates must be finite")
    return pts


def instance_record(points):
    pts = np.asarray(points, dtype=float)
    return {"dim": int(pts.shape[1]), "points": pts.tolist()}


def _tol(args):
    base = Tolerance()
    return Tolerance(
        feas_eps=args.feas_eps if args.feas_eps is not None else base.feas_eps,
        sing_eps=base.sing_eps,
        grad_eps=args.grad_eps if args.grad_eps is not None else base.grad_eps,
    )


def _config(args):
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _witness_payload(exc):
    out = {}
    for attr in ("witness", "radius", "point", "margin"):
        val = getattr(exc, attr, None)
        if val is not None:
            out[attr] = val
    return out


def cmd_select(args, tol):
    pts = load_instance(args.input)
    cert = select_steinitz(pts, tol, seed=args.seed, restarts=args.restarts)
    return EXIT_OK, _certificate_record(pts, cert)


def _certificate_record(pts, cert):
    rec = instance_record(pts[cert.selected_indices])
    rec.update(
        selected_indices=cert.selected_indices,
        certified_radius=cert.certified_radius,
        guaranteed_radius=cert.guaranteed_radius,
        pruned_count=cert.pruned_count,
        center=cert.center,
        lemma_checks=cert.lemma_checks,
    )
    return rec


def cmd_verify(args, tol):
    pts = load_instance(args.input)
    if not args.radius > 0:
        raise UsageError("--radius must be positive")
    check = certify_ball_in_hull(pts, args.radius, tol)
    rec = {"contained": check.contained, "inradius": check.inradius, "radius": args.radius}
    if not check.contained:
        rec["witness"] = check.witness
        rec["witness_support"] = float(np.max(pts @ check.witness)) if check.witness is not None else None
        rec["reason"] = BallNotContained.reason
    return (EXIT_OK if check.contained else EXIT_FAIL), rec


def cmd_center(args, tol):
    pts = load_instance(args.input)
    weights = None
    if args.weights:
        try:
            weights = [float(w) for w in args.weights.split(",")]
        except ValueError:
            raise UsageError("--weights must be comma-separated numbers")
        if len(weights) != len(pts) or min(weights) <= 0:
            raise UsageError("need one positive weight per point")
    W = WeightedSystem.of(pts, weights)
    res = solve_center(W, tol, max_iter=args.max_iter)
    rec = {
        "center": res.center,
        "residual": res.residual,
        "iterations": res.iterations,
        "converged": res.converged,
        "log_objective": res.log_objective,
        "zero_sum_residual": verify_zero_sum(W, res.center),
    }
    if not res.converged:
        raise NoConvergence(f"residual {res.residual:.3g} after {res.iterations} iterations")
    return EXIT_OK, rec


def cmd_exhaustive(args, tol):
    pts = load_instance(args.input)
    k = args.k if args.k is not None else 2 * pts.shape[1]
    rep = exhaustive_best_subset(pts, k, tol, budget=args.budget, jobs=args.jobs)
    return EXIT_OK, {
        "k": k,
        "best_subset": rep.best_subset,
        "best_radius": rep.best_radius,
        "subsets_examined": rep.subsets_examined,
    }


def cmd_grundbacher(args, tol):
    if args.dim < 2:
        raise UsageError("--dim must be at least 2")
    inst = generate_grundbacher(args.dim)
    rec = instance_record(inst.points)
    check = certify_ball_in_hull(inst.points, 1.0, tol)
    rec.update(hull_inradius=check.inradius, contains_unit_ball=check.contained, bound=grundbacher_bound(args.dim))
    if args.instance_out:
        with open(args.instance_out, "w", encoding="utf-8") as fh:
            json.dump(instance_record(inst.points), fh, indent=2)
            fh.write("\n")
    if args.exhaustive:
        rep = exhaustive_best_subset(inst.points, 2 * args.dim, tol, jobs=args.jobs)
        rec.update(best_subset=rep.best_subset, best_radius=rep.best_radius, subsets_examined=rep.subsets_examined)
    return EXIT_OK, rec


def cmd_corollary14(args, tol):
    pts = load_instance(args.input)
    cert = select_corollary14(pts, tol, seed=args.seed)
    return EXIT_OK, _certificate_record(pts, cert)


def cmd_macbeath(args, tol):
    pts = load_instance(args.input)
    rep = find_macbeath_point(pts, samples=args.samples, seed=args.seed)
    d = pts.shape[1]
    return EXIT_OK, {
        "exploratory": True,
        "point": rep.point,
        "volume_at_point": rep.volume_at_point,
        "volume_stderr": rep.volume_stderr,
        "inclusion_factor": rep.inclusion_factor,
        "conjectured_bound": d,
        "samples": rep.samples,
        "seed": rep.seed,
    }


def cmd_bench(args, tol):
    rows = []
    worst = math.inf
    for i in range(args.count):
        d = 2 + (i % 4) if args.dim is None else args.dim
        m = args.m if args.m is not None else d + 2 + (i * 7) % (29 - d)
        seed = args.seed + i
        inst = generate_random_ball_instance(d, m, seed, tol)
        t0 = time.perf_counter()
        cert = select_steinitz(inst.points, tol, seed=seed)
        dt = time.perf_counter() - t0
        worst = min(worst, cert.certified_radius / cert.guaranteed_radius)
        rows.append({"dim": d, "m": m, "seed": seed, "selected": cert.size,
                     "certified_radius": cert.certified_radius,
                     "guaranteed_radius": cert.guaranteed_radius, "seconds": dt})
    return EXIT_OK, {"runs": rows, "min_ratio_certified_to_guaranteed": worst}


def build_parser():
    parser = argparse.ArgumentParser(prog="qsteinitz", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--output", "-o", help="write the record here instead of stdout")
        p.add_argument("--feas-eps", type=float, default=None)
        p.add_argument("--grad-eps", type=float, default=None)
        p.add_argument("--jobs", type=int, default=1)
        return p

    p = add("select", cmd_select, "select at most 2d points keeping a concentric ball")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=3)

    p = add("verify", cmd_verify, "check that conv(points) contains radius * B^d")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--radius", type=float, required=True)

    p = add("center", cmd_center, "weighted polar center of the unit-halfspace system")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--weights", default=None, help="comma-separated positive weights")
    p.add_argument("--max-iter", type=int, default=200)

    p = add("exhaustive", cmd_exhaustive, "best k-subset by exhaustive search")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--k", type=int, default=None, help="subset size (default 2d)")
    p.add_argument("--budget", type=int, default=1_000_000)

    p = add("grundbacher", cmd_grundbacher, "the (2d+1)-point example with poor 2d-subsets")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--instance-out", default=None, help="also write the instance file here")

    p = add("corollary14", cmd_corollary14, "two-stage selection for arbitrary clouds")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--seed", type=int, default=0)

    p = add("macbeath", cmd_macbeath, "Monte-Carlo Macbeath point explorer (exploratory)")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--samples", type=int, default=2**16)
    p.add_argument("--seed", type=int, default=0)

    p = add("bench", cmd_bench, "run the selection pipeline on seeded random instances")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _emit(record, path):
    text = json.dumps(_jsonable(record), indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    head = {"tool": "qsteinitz", "version": __version__, "command": args.command, "config": _config(args)}
    try:
        tol = _tol(args)
        code, body = args.func(args, tol)
        status = "ok" if code == EXIT_OK else "fail"
    except (UsageError, ValueError) as exc:
        code, status, body = EXIT_USAGE, "error", {"reason": getattr(exc, "reason", "usage"), "message": str(exc)}
    except _INTERNAL as exc:
        code, status = EXIT_INTERNAL, "error"
        body = {"reason": exc.reason, "message": str(exc), **_witness_payload(exc)}
    except _CERTIFIED_FAILURES as exc:
        code, status = EXIT_FAIL, "fail"
        body = {"reason": exc.reason, "message": str(exc), **_witness_payload(exc)}
    except GeometryError as exc:
        code, status = EXIT_FAIL, "fail"
        body = {"reason": exc.reason, "message": str(exc)}
    _emit({**head, "status": status, **body}, getattr(args, "output", None))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
