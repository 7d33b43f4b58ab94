"""Command-line interface.

Every command prints a table as CSV (default) or as a JSON object
``{"metadata": ..., "rows": [...]}``.  Exact probabilities are written as
``"num/den"`` strings (JSON) or numerator/denominator columns (CSV), always
next to a binary64 rendering.

Exit codes: 0 success, 2 invalid input, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .approx import (
    ZeroVarianceError,
    approx_report,
    boundary_scan,
    boundary_trend,
    madcd_grid,
)
from .exact import distribution
from .moments import MAX_MOMENT_ORDER, central_moment, raw_moment
from .multivariate import (
    DEFAULT_COMPOSITION_CAP,
    CompositionCapError,
    joint_distribution,
    marginal_category_distribution,
)
from .simulate import SimConfig, empirical_distribution, tv_distance

OUT_DIR_ENV = "UNIQUEBOOT_OUT_DIR"
EXIT_INVALID = 2
EXIT_CAP = 3


class CapExceeded(Exception):
    pass


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _rational_fields(prefix: str, x: Fraction, fmt: str) -> dict[str, Any]:
    x = Fraction(x)
    if fmt == "json":
        return {prefix: frac_str(x), f"{prefix}_float": float(x)}
    return {
        f"{prefix}_numerator": x.numerator,
        f"{prefix}_denominator": x.denominator,
        f"{prefix}_float": repr(float(x)),
    }


def _csv_value(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(rows: list[dict[str, Any]], fmt: str, metadata: dict[str, Any]) -> str:
    if fmt == "json":
        return json.dumps({"metadata": metadata, "rows": rows}, indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(rows[0]))
        for row in rows:
            writer.writerow([_csv_value(v) for v in row.values()])
    return buf.getvalue()


def _metadata(args: argparse.Namespace, **extra: Any) -> dict[str, Any]:
    params = {k: v for k, v in vars(args).items() if k not in ("func", "format", "out", "timestamp")}
    stamp = args.timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds")
    meta = {
        "tool": "uniqueboot",
        "version": __version__,
        "command": args.command,
        "parameters": params,
        "timestamp": stamp,
    }
    meta.update(extra)
    return meta


def _emit(args: argparse.Namespace, rows: list[dict[str, Any]], **extra: Any) -> None:
    text = render(rows, args.format, _metadata(args, **extra))
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
        return
    path = args.out
    out_dir = os.environ.get(OUT_DIR_ENV)
    if out_dir and not os.path.isabs(path):
        path = os.path.join(out_dir, path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _note(args: argparse.Namespace, msg: str) -> None:
    # CSV has no metadata block; summaries go to stderr instead
    if args.format == "csv":
        print(msg, file=sys.stderr)


def cmd_dist(args: argparse.Namespace) -> None:
    dist = distribution(args.N, args.A)
    rows = []
    acc = Fraction(0)
    for k, p in enumerate(dist.probs):
        acc += p
        if p == 0:
            continue
        row: dict[str, Any] = {"k": k}
        row.update(_rational_fields("p", p, args.format))
        if args.cdf:
            row.update(_rational_fields("cdf", acc, args.format))
        rows.append(row)
    _emit(args, rows)


def cmd_moments(args: argparse.Namespace) -> None:
    cap = args.max_order if args.max_order is not None else MAX_MOMENT_ORDER
    fn = central_moment if args.central else raw_moment
    if args.N < 1:
        raise ValueError(f"N must be at least 1, got {args.N}")
    rows = []
    for t in range(args.t + 1):
        row: dict[str, Any] = {"t": t}
        row.update(_rational_fields("moment", fn(args.N, args.A, t, max_order=cap), args.format))
        rows.append(row)
    _emit(args, rows, kind="central" if args.central else "raw")


def cmd_check(args: argparse.Namespace) -> None:
    r = approx_report(args.N, args.A, log_base=args.log_base)
    row = {
        "N": r.N,
        "A": r.A,
        "mean": r.mean,
        "sd": r.sd,
        "madcd": r.madcd,
        "jsd": r.jsd,
        "jsd_bits": r.jsd / math.log(2) if args.log_base == math.e else None,
        "heuristic_pass": r.heuristic_pass,
    }
    _emit(args, [row])


def _p_grid(step: Fraction) -> list[Fraction]:
    n = int(Fraction(1, 2) / step)
    return [step * i for i in range(1, n + 1)]


def cmd_grid(args: argparse.Namespace) -> None:
    if args.n_max < 1:
        raise ValueError("--n-max must be at least 1")
    if args.baseline == "binomial":
        step = Fraction(args.p_step)
        if not 0 < step <= Fraction(1, 2):
            raise ValueError("--p-step must lie in (0, 0.5]")
        ps = _p_grid(step)
        cells = madcd_grid(range(1, args.n_max + 1), ps, "binomial", jobs=args.jobs,
                           log_base=args.log_base)
        names = ("n_b", "p")
    else:
        if args.a_max < 1:
            raise ValueError("--a-max must be at least 1")
        if args.cap is not None and max(args.n_max, args.a_max) > args.cap:
            raise CapExceeded(f"grid {args.n_max}x{args.a_max} exceeds cap {args.cap}; raise --cap")
        cells = madcd_grid(range(1, args.n_max + 1), range(1, args.a_max + 1), "exact",
                           jobs=args.jobs, log_base=args.log_base, cap=None)
        names = ("N", "A")
    rows = []
    for c in cells:
        y = float(c.y) if isinstance(c.y, Fraction) else c.y
        rows.append({names[0]: c.x, names[1]: y, "madcd": c.madcd, "jsd": c.jsd,
                     "heuristic_pass": c.heuristic_pass, "flag": c.flag})
    inside = [c for c in cells if c.heuristic_pass and c.madcd is not None]
    summary = {
        "cells": len(cells),
        "in_region": len(inside),
        "in_region_max_madcd": max((c.madcd for c in inside), default=None),
        "in_region_max_jsd": max((c.jsd for c in inside), default=None),
    }
    _note(args, " ".join(f"{k}={v}" for k, v in summary.items()))
    _emit(args, rows, summary=summary)


def cmd_boundary(args: argparse.Namespace) -> None:
    if args.cap is not None and args.n_max > args.cap:
        raise CapExceeded(f"--n-max {args.n_max} exceeds cap {args.cap}; raise --cap")
    points = boundary_scan(range(args.n_min, args.n_max + 1), jobs=args.jobs)
    rows = [{"N": p.N, "A_lower": p.A_lower, "A_upper": p.A_upper,
             "madcd_lower": p.madcd_lower, "madcd_upper": p.madcd_upper} for p in points]
    trend = boundary_trend(points) if len(points) >= 2 else {}
    _note(args, " ".join(f"{k}={v}" for k, v in trend.items()))
    _emit(args, rows, trend=trend)


def cmd_joint(args: argparse.Namespace) -> None:
    sizes = args.sizes
    if args.marginal is not None:
        pmf = marginal_category_distribution(sizes, args.A, args.marginal)
        rows = []
        for k, p in pmf.items():
            row: dict[str, Any] = {f"k_{args.marginal}": k}
            row.update(_rational_fields("p", p, args.format))
            rows.append(row)
        _emit(args, rows)
        return
    joint = joint_distribution(sizes, args.A, cap=args.cap)
    rows = []
    for k, p in joint.pmf.items():
        row = {f"k_{i + 1}": ks for i, ks in enumerate(k)}
        row.update(_rational_fields("p", p, args.format))
        rows.append(row)
    _emit(args, rows)


def cmd_sample(args: argparse.Namespace) -> None:
    sizes = args.sizes
    if len(sizes) == 1:
        config = SimConfig(seed=args.seed, replicates=args.reps, A=args.A, N=sizes[0])
        exact: dict | None = {k: p for k, p in enumerate(distribution(sizes[0], args.A).probs) if p}
    else:
        config = SimConfig(seed=args.seed, replicates=args.reps, A=args.A, profile=tuple(sizes))
        try:
            exact = joint_distribution(sizes, args.A, cap=args.cap).pmf
        except CompositionCapError:
            exact = None
    emp = empirical_distribution(config, workers=args.workers)
    keys = sorted(set(emp.counts) | set(exact or {}))
    rows = []
    for key in keys:
        parts = key if isinstance(key, tuple) else (key,)
        row: dict[str, Any] = {f"k_{i + 1}" if len(parts) > 1 else "k": v for i, v in enumerate(parts)}
        if exact is not None:
            row.update(_rational_fields("p", exact.get(key, Fraction(0)), args.format))
        row["tally"] = emp.counts.get(key, 0)
        row["freq"] = emp.counts.get(key, 0) / emp.total
        rows.append(row)
    tv = tv_distance(emp, exact) if exact is not None else None
    _note(args, f"tv_distance={tv!r}")
    _emit(args, rows, tv_distance=tv, replicates=emp.total)


def _log_base(text: str) -> float:
    if text == "e":
        return math.e
    value = float(text)
    if not value > 1:
        raise argparse.ArgumentTypeError("log base must be 'e' or a number > 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uniqueboot",
        description="Exact and approximate distribution of unique items in bootstrap samples.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None,
                        help=f"output file (default stdout; relative paths go under ${OUT_DIR_ENV} if set)")
    common.add_argument("--timestamp", default=None,
                        help="fixed metadata timestamp, for byte-identical JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", parents=[common], help="exact pmf of the unique count")
    p.add_argument("N", type=int)
    p.add_argument("A", type=int)
    p.add_argument("--cdf", action="store_true", help="add cumulative columns")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("moments", parents=[common], help="integer moments 0..t")
    p.add_argument("N", type=int)
    p.add_argument("A", type=int)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--central", action="store_true")
    p.add_argument("--max-order", type=int, default=None,
                   help=f"override the moment order cap ({MAX_MOMENT_ORDER})")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("check", parents=[common], help="normal approximation report")
    p.add_argument("N", type=int)
    p.add_argument("A", type=int)
    p.add_argument("--log-base", type=_log_base, default=math.e)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("grid", parents=[common], help="MADCD/JSD parameter scan")
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--a-max", type=int, default=20)
    p.add_argument("--baseline", choices=("unique", "binomial"), default="unique")
    p.add_argument("--p-step", default="0.005", help="binomial p grid step (exact decimal)")
    p.add_argument("--cap", type=int, default=150, help="max N and A for exact scans")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--log-base", type=_log_base, default=math.e)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("boundary", parents=[common], help="MADCD along the acceptance boundaries")
    p.add_argument("--n-min", type=int, default=6)
    p.add_argument("--n-max", type=int, default=150)
    p.add_argument("--cap", type=int, default=150)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("joint", parents=[common], help="joint pmf of per-category unique counts")
    p.add_argument("sizes", type=int, nargs="+")
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--marginal", type=int, default=None, metavar="S",
                   help="print the marginal of category S (1-based)")
    p.add_argument("--cap", type=int, default=DEFAULT_COMPOSITION_CAP)
    p.set_defaults(func=cmd_joint)

    p = sub.add_parser("sample", parents=[common], help="seeded Monte Carlo tallies")
    p.add_argument("sizes", type=int, nargs="+", help="N, or category sizes")
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--reps", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cap", type=int, default=DEFAULT_COMPOSITION_CAP)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (CapExceeded, CompositionCapError) as exc:
        print(f"uniqueboot: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, IndexError, ZeroVarianceError) as exc:
        print(f"uniqueboot: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return 0


if __name__ == "__main__":
    sys.exit(main())
