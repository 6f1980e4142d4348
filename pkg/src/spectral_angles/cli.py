"""Command-line front end.

Exit codes: 0 success, 1 verification or solve failure, 2 usage or
configuration error.
"""

import argparse
import csv
import io as _io
import os
import sys

import numpy as np

from . import io
from .campaign import THEOREMS, CampaignConfig, ConfigError, run_campaign
from .errors import SpectraOverlap, SpectralAngleError
from .instances import generate_instance
from .sylvester import NAGY_CONSTANT, TOL_QUAD, TOL_RES, bound_ratio, residual, solve_integral, solve_spectral
from .verifiers import TOL_MARGIN, direct_rotation_demo, mixed_subspace_demo, sharp_example, sharpness_grid

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
TOL_SHARP = 1e-10
TOL_ENV = "SPECTRAL_ANGLE_TOL"

VERIFY_CSV = ("trial", "seed", "status", "theorem", "norm", "dim", "d", "vnorm", "bound", "measured", "margin", "passed")
SHARPNESS_CSV = ("x", "theta", "bound", "diff")


class UsageError(Exception):
    pass


def _range(text, cast):
    lo, sep, hi = text.partition(":")
    try:
        return (cast(lo), cast(hi)) if sep else cast(lo)
    except ValueError:
        raise UsageError(f"cannot parse {text!r}") from None


def _split(text):
    parts = text.split(",")
    try:
        if len(parts) != 2:
            raise ValueError
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"--split expects a,b; got {text!r}") from None


def _tol_margin():
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return TOL_MARGIN
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV}={raw!r} is not a number") from None
    if not tol >= 0:
        raise UsageError(f"{TOL_ENV} must be non-negative")
    return tol


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows):
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt(x):
    return repr(float(x)) if x is not None else ""


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(args):
    config = CampaignConfig(
        theorem=args.theorem,
        trials=args.trials,
        dim=_range(args.dim, int),
        split=_split(args.split) if args.split else None,
        d=args.gap,
        vnorm=_range(args.vnorm, float),
        norm=args.norm,
        seed=args.seed,
        tol_margin=_tol_margin(),
    )
    result = run_campaign(config)
    if args.out:
        if args.format == "csv":
            rows = []
            for rec in result.records:
                if not rec.reports:
                    rows.append([rec.trial, rec.seed, rec.status, config.theorem] + [""] * 8)
                for rep in rec.reports:
                    rows.append(
                        [rec.trial, rec.seed, rec.status, rep.theorem, rep.details.get("norm", "op"), rep.dims[0]]
                        + [_fmt(v) for v in (rep.d, rep.vnorm, rep.bound, rep.measured, rep.margin)]
                        + [rep.passed]
                    )
            _emit(_csv(VERIFY_CSV, rows), args.out)
        else:
            _emit(io.dumps(result.to_json()), args.out)
    s = result.summary()
    print(
        f"{s['theorem']}: {s['passed']}/{s['trials']} pass, {s['failed']} fail, "
        f"{s['not_applicable']} not applicable; worst margin {s['worst_margin']:.3e}; "
        f"max bound ratio {s['max_bound_ratio']:.4f}"
    )
    return EXIT_OK if result.ok else EXIT_FAIL


def cmd_sharpness(args):
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    rows = []
    for x in sharpness_grid(args.steps):
        ex = sharp_example(x)
        bound = 0.5 * np.arcsin(x)
        rows.append((float(x), ex.theta, float(bound), abs(ex.theta - bound)))
    worst = max(r[3] for r in rows)
    if args.format == "csv":
        _emit(_csv(SHARPNESS_CSV, [[_fmt(v) for v in r] for r in rows]), args.out)
    else:
        _emit(io.dumps({"rows": [dict(zip(SHARPNESS_CSV, r)) for r in rows], "max_diff": worst}), args.out)
    if args.out:
        print(f"sharpness: {len(rows)} points, max |diff| {worst:.3e}")
    return EXIT_OK if worst <= TOL_SHARP else EXIT_FAIL


def cmd_sylvester(args):
    try:
        problem = io.problem_from_json(io.read_json(args.input))
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read problem: {exc}") from None
    try:
        if args.method == "integral":
            y = solve_integral(problem)
            tol = TOL_QUAD
        else:
            y = solve_spectral(problem)
            tol = TOL_RES
    except SpectraOverlap as exc:
        print(f"SpectraOverlap: {exc}", file=sys.stderr)
        return EXIT_FAIL
    res, ratio = residual(problem, y), bound_ratio(problem, y)
    out = dict(io.matrix_to_json(y), residual=res, bound_ratio=ratio, method=args.method, d=problem.d)
    _emit(io.dumps(out), args.out)
    ok = res <= tol and ratio <= NAGY_CONSTANT + 1e-9
    if args.out:
        print(f"sylvester ({args.method}): residual {res:.3e}, bound ratio {ratio:.6f}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_demo(args):
    if args.name == "mixed-angle":
        inst = generate_instance(4, (2, 2), 1.0, 0.2, args.seed)
        rep = mixed_subspace_demo(inst.A, inst.V, inst.sigma, seed=args.seed)
        det = rep.details
        print(f"alpha = {det['alpha']:.6f}")
        print("low band  [0, alpha]:        " + ", ".join(f"{t:.6f}" for t in det["low_band"]))
        print("high band [pi/2 - alpha, pi/2]: " + ", ".join(f"{t:.6f}" for t in det["high_band"]))
    else:
        inst = generate_instance(6, (3, 3), 1.0, 0.2, args.seed)
        rep = direct_rotation_demo(inst.A, inst.V, inst.sigma, seed=args.seed)
        for name, c in rep.details["checks"].items():
            print(f"{name}: {c['residual']:.3e}")
    if args.out:
        io.write_json(args.out, rep.with_seed(args.seed).to_json())
    return EXIT_OK if rep.ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spectral-angles", description="Operator angles and subspace perturbation bounds."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a seeded verification campaign")
    v.add_argument("--theorem", required=True, choices=THEOREMS)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--dim", default="12", help="matrix size, or lo:hi drawn per trial")
    v.add_argument("--split", help="eigenvalue counts a,b of the two spectral components")
    v.add_argument("--gap", type=float, default=1.0, help="spectral gap d")
    v.add_argument("--vnorm", default="0.25", help="perturbation norm, or a:b swept over the trials")
    v.add_argument("--norm", default="op", help="op, kyfan:N, schatten:P or all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sharpness", help="reproduce the equality curve of the 2x2 example")
    s.add_argument("--steps", type=int, default=9)
    s.add_argument("--out")
    s.add_argument("--format", choices=("json", "csv"), default="csv")
    s.set_defaults(func=cmd_sharpness)

    y = sub.add_parser("sylvester", help="solve Y B0 - B1 Y = T from a JSON file")
    y.add_argument("input")
    y.add_argument("--method", choices=("spectral", "integral"), default="spectral")
    y.add_argument("--out")
    y.set_defaults(func=cmd_sylvester)

    d = sub.add_parser("demo", help="run a named construction")
    d.add_argument("name", choices=("mixed-angle", "direct-rotation"))
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--out")
    d.set_defaults(func=cmd_demo)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpectralAngleError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


def run():
    sys.exit(main())
