"""Command-line front end.

Exit codes: 0 success (every check passed), 1 a check failed,
2 bad input or an unmet precondition.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import gallery, theorems
from .arith import INF, format_decimal, format_rational, to_fraction
from .discrete import (
    SampledSignal,
    brute_force_maximal,
    discrete_local_maximal,
    discrete_maximal,
    discrete_maximal_stats,
    sample_step,
    warm_up,
    write_csv,
)
from .exact import local_maximal, maximal
from .funcspace import FunctionSchemaError, PiecewiseLinearFunction, StepFunction, dump_function, l1_norm, load_function
from .pwl import pwl_maximal_values

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers


def _parse_grid(spec: str) -> tuple:
    """``lo:hi:n`` -> (lo, hi, n) with rational ends."""
    try:
        lo, hi, n = spec.split(":")
        lo, hi, n = to_fraction(lo), to_fraction(hi), int(n)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad grid {spec!r}; expected lo:hi:n") from exc
    if not lo < hi or n < 2:
        raise UsageError("grid needs lo < hi and n >= 2")
    return lo, hi, n


def _write_rows(rows, header, fmt: str, out) -> None:
    if fmt == "json":
        json.dump([dict(zip(header, r)) for r in rows], out, indent=2)
        out.write("\n")
        return
    delim = "\t" if fmt == "tsv" else ","
    w = csv.writer(out, delimiter=delim, lineterminator="\n")
    for r in rows:
        w.writerow(r)


def _fmt(v, exact_rationals: bool) -> str:
    if exact_rationals and isinstance(v, Fraction):
        return format_rational(v)
    return format_decimal(v)


# ---------------------------------------------------------------------------
# eval


def cmd_eval(args) -> int:
    f = load_function(args.function)
    R = None
    if args.R is not None:
        R = to_fraction(args.R)
        if R <= 0:
            raise UsageError("R must be positive")
    if args.engine == "discrete":
        if args.grid is None:
            raise UsageError("the discrete engine needs --grid lo:hi:n")
        if not isinstance(f, StepFunction):
            raise UsageError("the discrete engine samples step functions")
        lo, hi, n = _parse_grid(args.grid)
        s = sample_step(f, n, (lo, hi))
        if R is None:
            out = discrete_maximal(s)
        else:
            W = max(1, int(R / ((hi - lo) / n)))
            out = discrete_local_maximal(s, W)
        rows = [(format_decimal(float(x)), format_decimal(float(v))) for x, v in zip(s.positions, out.samples)]
        _write_rows(rows, ("x", "value"), args.format, sys.stdout)
        return EXIT_OK
    if args.grid is not None:
        lo, hi, n = _parse_grid(args.grid)
        h = (hi - lo) / n
        xs = [lo + (2 * k + 1) * h / 2 for k in range(n)]
    elif args.x:
        xs = [to_fraction(x) for x in args.x]
    else:
        raise UsageError("give evaluation points with --x or --grid")
    for x in xs:
        if not f.domain.contains(x):
            raise UsageError(f"point {x} outside the domain {f.domain}")
    if isinstance(f, PiecewiseLinearFunction):
        vals = pwl_maximal_values(f, [float(x) for x in xs], None if R is None else float(R)).value
        rows = [(_fmt(x, args.exact_rationals), format_decimal(float(v))) for x, v in zip(xs, vals)]
    else:
        p = maximal(f) if R is None else local_maximal(f, R)
        rows = [(_fmt(x, args.exact_rationals), _fmt(p(x), args.exact_rationals)) for x in xs]
    _write_rows(rows, ("x", "value"), args.format, sys.stdout)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    if args.suite not in theorems.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(theorems.SUITES)}")
    opts = {"n": args.n, "K": args.K, "N": args.N, "p": args.p}
    reports = theorems.run_suite(args.suite, seed=args.seed, count=args.count, jobs=args.jobs, **opts)
    if args.format == "tsv":
        print("claim\tinstance\tlhs\trhs\ttightness\tprovenance\tresult")
        for r in reports:
            print(_tsv_from_dict(r))
    else:
        json.dump(reports, sys.stdout, indent=2)
        sys.stdout.write("\n")
    failed = sum(1 for r in reports if not r["passed"])
    print(f"{len(reports) - failed}/{len(reports)} passed", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def _decimal_of(v) -> str:
    if isinstance(v, dict):
        return v.get("decimal", "")
    return "" if v is None else str(v)


def _tsv_from_dict(r: dict) -> str:
    return "\t".join([
        r["claim"],
        r["instance"],
        _decimal_of(r["lhs"]),
        _decimal_of(r["rhs"]),
        _decimal_of(r["tightness"]),
        r["provenance"],
        "pass" if r["passed"] else "FAIL",
    ])


# ---------------------------------------------------------------------------
# gallery


def _stem(name: str, params) -> str:
    tail = "-".join(str(p).replace("/", "_") for p in params)
    return f"{name}-{tail}" if tail else name


def _sample_window(f):
    if f.domain.is_bounded:
        return f.domain.left, f.domain.right
    pts = list(f.breakpoints if isinstance(f, StepFunction) else f.knots)
    lo, hi = pts[0], pts[-1]
    pad = max(hi - lo, Fraction(1))
    left = f.domain.left if f.domain.left != -INF else lo - pad
    right = f.domain.right if f.domain.right != INF else hi + pad
    return left, right


def cmd_gallery(args) -> int:
    if args.name not in gallery.GENERATORS:
        raise UsageError(f"unknown generator {args.name!r}; choose from {', '.join(gallery.GENERATORS)}")
    try:
        obj = gallery.build(args.name, args.params)
        info = gallery.manifest(args.name, args.params)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = _stem(args.name, args.params)
    files = []
    f = obj[0] if isinstance(obj, tuple) else obj
    if args.emit in ("function", "both"):
        if isinstance(f, SampledSignal):
            path = outdir / f"{stem}.csv"
            write_csv(f, path)
        else:
            path = outdir / f"{stem}.json"
            dump_function(f, path)
        files.append(str(path))
        if isinstance(obj, tuple):
            dpath = outdir / f"{stem}.derivative.json"
            dump_function(obj[1], dpath)
            files.append(str(dpath))
    if args.emit in ("maximal", "both"):
        path = outdir / f"{stem}.maximal.csv"
        path.write_text(_maximal_csv(f, args.samples, args.exact_rationals))
        files.append(str(path))
    info["files"] = files
    if isinstance(f, StepFunction):
        info["measure"] = format_rational(l1_norm(f))
    json.dump(info, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def _maximal_csv(f, samples: int, exact_rationals: bool) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(f, SampledSignal):
        out = discrete_maximal(f)
        for x, v in zip(f.positions, out.samples):
            w.writerow([format_decimal(float(x)), format_decimal(float(v))])
        return buf.getvalue()
    lo, hi = _sample_window(f)
    h = (hi - lo) / samples
    xs = [lo + (2 * k + 1) * h / 2 for k in range(samples)]
    if isinstance(f, StepFunction):
        p = maximal(f)
        for x in xs:
            w.writerow([_fmt(x, exact_rationals), _fmt(p(x), exact_rationals)])
    else:
        vals = pwl_maximal_values(f, [float(x) for x in xs]).value
        for x, v in zip(xs, vals):
            w.writerow([_fmt(x, exact_rationals), format_decimal(float(v))])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# bench


ORACLE_CAP = 20000


def time_kernel(n: int, repetitions: int, rng) -> tuple:
    """Best wall time of the linear kernel on ``n`` uniform samples, and its stats."""
    s = SampledSignal(rng.random(n) * 100)
    best, stats = float("inf"), None
    for _ in range(repetitions):
        t0 = time.perf_counter()
        _, stats = discrete_maximal_stats(s)
        best = min(best, time.perf_counter() - t0)
    return best, stats, s


def cmd_bench(args) -> int:
    sizes = [int(float(n)) for n in args.n]
    if any(n < 1 for n in sizes):
        raise UsageError("sizes must be positive")
    if args.repetitions < 1:
        raise UsageError("repetitions must be positive")
    warm_up()
    rng = np.random.default_rng(args.seed)
    print("n\tkernel_s\tkernel_2n_s\tratio_2n_over_n\toracle_s\thull_ops\thull_ops_per_n\treplay_ops")
    for n in sizes:
        t1, stats, s = time_kernel(n, args.repetitions, rng)
        t2, _, _ = time_kernel(2 * n, args.repetitions, rng)
        oracle = ""
        if n <= ORACLE_CAP:
            t0 = time.perf_counter()
            brute_force_maximal(s)
            oracle = format_decimal(time.perf_counter() - t0, 6)
        print("\t".join([
            str(n),
            format_decimal(t1, 6),
            format_decimal(t2, 6),
            format_decimal(t2 / t1, 4),
            oracle,
            str(stats.hull_ops),
            format_decimal(stats.hull_ops / n, 6),
            str(stats.replay_ops),
        ]), flush=True)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser and config


def _read_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment; dashes and underscores mix."""
    cfg = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("["):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        cfg[key.replace("-", "_")] = value.strip("\"'")
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bvmax", description="Maximal functions of functions of bounded variation.")
    parser.add_argument("--config", help="key = value file supplying defaults for any flag")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate Mf or M_R f at points or on a grid")
    ev.add_argument("function", help="function JSON file")
    ev.add_argument("--x", nargs="+", help="evaluation points (rationals accepted)")
    ev.add_argument("--grid", help="lo:hi:n, evaluated at the n cell midpoints")
    ev.add_argument("--engine", choices=("exact", "discrete"), default="exact")
    ev.add_argument("--R", help="window length cap")
    ev.add_argument("--format", choices=("csv", "json", "tsv"), default="csv")
    ev.add_argument("--exact-rationals", action="store_true", help="print exact values as p/q")
    ev.set_defaults(handler=cmd_eval)

    ve = sub.add_parser("verify", help="run a verification suite")
    ve.add_argument("suite", help=" | ".join(theorems.SUITES))
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--count", type=int, default=100)
    ve.add_argument("--jobs", type=int, default=1)
    ve.add_argument("--n", type=int, help="fat Cantor stage")
    ve.add_argument("--K", type=int, help="truncation level of the discontinuity example")
    ve.add_argument("--N", type=int, help="plateau notch parameter")
    ve.add_argument("--p", help="Sobolev exponent (number or inf)")
    ve.add_argument("--format", choices=("json", "tsv"), default="json")
    ve.set_defaults(handler=cmd_verify)

    ga = sub.add_parser("gallery", help="write an example function and/or its maximal function")
    ga.add_argument("name", help=" | ".join(gallery.GENERATORS))
    ga.add_argument("params", nargs="*")
    ga.add_argument("--emit", choices=("function", "maximal", "both"), default="function")
    ga.add_argument("--out", default=".", help="output directory")
    ga.add_argument("--samples", type=int, default=1000, help="rows in the sampled maximal CSV")
    ga.add_argument("--exact-rationals", action="store_true")
    ga.set_defaults(handler=cmd_gallery)

    be = sub.add_parser("bench", help="time the linear kernel against the quadratic oracle")
    be.add_argument("--n", nargs="+", default=["1e5", "1e6", "1e7"])
    be.add_argument("--repetitions", type=int, default=3)
    be.add_argument("--seed", type=int, default=0)
    be.set_defaults(handler=cmd_bench)
    parser._subcommands = {"eval": ev, "verify": ve, "gallery": ga, "bench": be}
    return parser


def _apply_config(parser, argv) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = _read_config(known.config)
    for sp in parser._subcommands.values():
        defaults = {}
        for action in sp._actions:
            if action.dest not in cfg:
                continue
            raw = cfg[action.dest]
            if action.nargs in ("+", "*"):
                value = raw.replace(",", " ").split()
            elif isinstance(action, argparse._StoreTrueAction):
                value = raw.lower() in ("1", "true", "yes", "on")
            elif action.type is not None:
                value = action.type(raw)
            else:
                value = raw
            defaults[action.dest] = value
        sp.set_defaults(**defaults)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return args.handler(args)
    except (UsageError, FunctionSchemaError, theorems.PreconditionError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
