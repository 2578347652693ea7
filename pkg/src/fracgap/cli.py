"""Command-line front door: run experiments, emit CSV/JSON reports.

Exit codes: 0 success, 1 usage error, 2 computation error (budget or
tolerance failures). Output is byte-identical across runs and thread counts
for identical flags; wall time is only included with --timing.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import DEFAULT_CONFIG
from .errors import FracgapError
from .fracint import integrate_frac_exact, integrate_floor, integrate_frac_quadrature
from .funcspec import lookup
from .gapseq import (
    assumption_audit,
    comparison_sweep,
    compute_rst,
    default_rst_grid,
    primes_sequence,
    residual_sweep,
    squares_sequence,
    stat_sweep,
    theta_interval_scan,
    SWEEP_KINDS,
)
from .primes import PrimeTable, read_cache, sieve, write_cache
from .report import Report, render
from .specialfn import gamma_via_fracint, zeta_via_fracint

DEFAULT_CHECKPOINTS = (10**4, 10**5, 10**6, 10**7)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", type=Path, default=None, help="write report here instead of stdout")
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker threads; output does not depend on this")
    parser.add_argument("--timing", action="store_true",
                        help="include wall time in JSON output (breaks byte-reproducibility)")


def _add_table_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--limit", type=int, required=True, help="sieve limit")
    parser.add_argument("--cache", type=Path, default=None,
                        help="prime table cache file (read if present, else written)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracgap",
        description="Fractional-part integrals, constant extraction, and prime gap statistics",
    )
    parser.add_argument("--version", action="version", version=f"fracgap {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("fracint", help="exact integral of {f} and floor(f) on [a, b]")
    p.add_argument("--fn", required=True, help="catalog name or family like 4/x")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--quad", action="store_true", help="add an adaptive-quadrature column")
    p.add_argument("--tol", type=float, default=DEFAULT_CONFIG.quad_tol)
    _add_common(p)

    p = sub.add_parser("zeta", help="zeta(n) from the fractional-part integral identity")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=int, required=True, help="truncation parameter")
    _add_common(p)

    p = sub.add_parser("gamma", help="1 - gamma from the mean of {a/x} on [1, a]")
    p.add_argument("--a", type=int, required=True, help="truncation parameter")
    _add_common(p)

    p = sub.add_parser("sieve", help="sieve primes and report the count")
    _add_table_args(p)
    _add_common(p)

    p = sub.add_parser("gaps", help="per-gap table with merits")
    _add_table_args(p)
    _add_common(p)

    p = sub.add_parser("rst", help="sandwich triples r/s/t on a geometric index grid")
    p.add_argument("--seq", choices=("primes", "squares"), default="primes")
    p.add_argument("--fn", default="identity")
    p.add_argument("--seed-schedule", type=float, default=2.0,
                   help="geometric base of the index grid")
    _add_table_args(p)
    _add_common(p)

    p = sub.add_parser("residuals", help="per-gap reciprocal-integral residuals")
    p.add_argument("--seq", choices=("primes", "squares"), default="primes")
    p.add_argument("--fn", default="identity")
    _add_table_args(p)
    _add_common(p)

    p = sub.add_parser("assumptions", help="telescoped gap sum checkpoints (no verdict)")
    p.add_argument("--fn", default=None, help="optional extra telescoped sum for this f")
    p.add_argument("--checkpoints", default=None,
                   help="comma-separated term counts; default 1e4,1e5,1e6,1e7 clipped to the table")
    _add_table_args(p)
    _add_common(p)

    p = sub.add_parser("theta", help="scan prime intervals (p_m, (1+theta) p_m]")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--m-max", type=int, default=None)
    p.add_argument("--all", action="store_true", help="emit every m, not only violations")
    _add_table_args(p)
    _add_common(p)

    p = sub.add_parser("stats", help="gap statistic sweeps with running extrema")
    p.add_argument("which", choices=SWEEP_KINDS)
    p.add_argument("--min-prime", type=int, default=DEFAULT_CONFIG.min_prime_extrema,
                   help="smallest p_n tracked by running sup/inf")
    _add_table_args(p)
    _add_common(p)

    p = sub.add_parser("comparison", help="termwise d/log vs d/log^2 comparison")
    p.add_argument("--k-min", type=int, default=1)
    _add_table_args(p)
    _add_common(p)

    return parser


def _load_table(args) -> PrimeTable:
    limit = int(args.limit)
    cache: Path | None = args.cache
    if cache is not None and cache.exists():
        table = read_cache(cache)
        if table.limit >= limit:
            return table.restrict(limit)
    table = sieve(limit, threads=args.threads)
    if cache is not None:
        write_cache(table, cache)
    return table


def _gap_columns(table: PrimeTable) -> dict[str, np.ndarray]:
    from .primes import gap_arrays

    n, p, q = gap_arrays(table)
    d = q - p
    lp = np.log(p.astype(np.float64))
    df = d.astype(np.float64)
    return {
        "n": n,
        "p": p,
        "p_next": q,
        "d": d,
        "merit": df / lp,
        "merit2": df / lp**2,
        "merit3": df / lp**3,
    }


def _cmd_fracint(args) -> Report:
    spec = lookup(args.fn)
    frac = integrate_frac_exact(spec, args.a, args.b, threads=args.threads)
    floor = integrate_floor(spec, args.a, args.b, threads=args.threads)
    columns = ["fn", "a", "b", "frac", "floor", "plain"]
    row = [spec.name, args.a, args.b, frac, floor, frac + floor]
    if args.quad:
        columns.append("quadrature")
        row.append(
            integrate_frac_quadrature(spec, args.a, args.b, args.tol, threads=args.threads)
        )
    params = {"fn": args.fn, "a": args.a, "b": args.b, "tol": args.tol}
    return Report("fracint", columns, [row], params)


def _cmd_zeta(args) -> Report:
    est = zeta_via_fracint(args.n, args.c, threads=args.threads)
    return Report(
        "zeta",
        ["n", "c", "estimate", "predicted_error", "method"],
        [[args.n, est.parameter, est.value, est.predicted_error, est.method]],
        {"n": args.n, "c": args.c},
    )


def _cmd_gamma(args) -> Report:
    est = gamma_via_fracint(args.a, threads=args.threads)
    return Report(
        "gamma",
        ["a", "estimate", "predicted_error", "method"],
        [[est.parameter, est.value, est.predicted_error, est.method]],
        {"a": args.a},
    )


def _cmd_sieve(args) -> Report:
    table = _load_table(args)
    return Report(
        "sieve",
        ["limit", "count", "largest_prime"],
        [[table.limit, table.count, int(table.primes[-1])]],
        {"limit": args.limit},
    )


def _cmd_gaps(args) -> Report:
    table = _load_table(args)
    return Report.from_arrays("gaps", _gap_columns(table), {"limit": args.limit})


def _sequence(args, table: PrimeTable):
    if args.seq == "primes":
        return primes_sequence(table)
    return squares_sequence(args.limit)


def _cmd_rst(args) -> Report:
    table = _load_table(args)
    seq = _sequence(args, table)
    f = lookup(args.fn)
    grid = default_rst_grid(seq.count, base=args.seed_schedule)
    rows = []
    for n in grid:
        v = compute_rst(seq, f, n, threads=args.threads)
        rows.append(
            [
                v.n, v.a1, v.an, v.r, v.s, v.t,
                v.s <= v.r, v.r < v.t + v.upper_slack, v.r <= v.t,
            ]
        )
    return Report(
        "rst",
        ["n", "a1", "an", "r", "s", "t", "lower_ok", "upper_ok", "r_le_t"],
        rows,
        {"seq": seq.name, "fn": f.name, "limit": args.limit, "base": args.seed_schedule},
    )


def _cmd_residuals(args) -> Report:
    table = _load_table(args)
    seq = _sequence(args, table)
    f = lookup(args.fn)
    sweep = residual_sweep(seq, f)
    return Report.from_arrays(
        "residuals",
        {
            "n": sweep.n,
            "a": sweep.a.astype(np.int64),
            "a_next": sweep.a_next.astype(np.int64),
            "d": sweep.d.astype(np.int64),
            "residual": sweep.residual,
            "lower_bound": sweep.lower_bound,
            "in_bounds": (sweep.lower_bound <= sweep.residual) & (sweep.residual <= 0.0),
        },
        {"seq": seq.name, "fn": f.name, "limit": args.limit},
    )


def _cmd_assumptions(args) -> Report:
    table = _load_table(args)
    f = lookup(args.fn) if args.fn else None
    if args.checkpoints:
        points = [int(float(tok)) for tok in args.checkpoints.split(",")]
    else:
        points = [n for n in DEFAULT_CHECKPOINTS if n + 1 <= table.count]
        if not points:
            points = [table.count - 1]
    samples = assumption_audit(table, points, f)
    columns = ["n_terms", "l1", "l2", "slope_l1", "slope_l2"]
    if f is not None:
        columns.insert(3, "lf")
    rows = []
    prev = None
    import math as _math

    for s in samples:
        if prev is None:
            sl1 = sl2 = _math.nan
        else:
            dn = _math.log(s.n_terms) - _math.log(prev.n_terms)
            sl1 = (_math.log(s.l1) - _math.log(prev.l1)) / dn
            sl2 = (_math.log(s.l2) - _math.log(prev.l2)) / dn
        row = [s.n_terms, s.l1, s.l2]
        if f is not None:
            row.append(s.lf)
        row.extend([sl1, sl2])
        rows.append(row)
        prev = s
    params = {"limit": args.limit, "checkpoints": ",".join(str(p) for p in points)}
    if f is not None:
        params["fn"] = f.name
    return Report("assumptions", columns, rows, params)


def _cmd_theta(args) -> Report:
    table = _load_table(args)
    scan = theta_interval_scan(table, args.theta, args.m_max)
    if args.all:
        m = np.arange(1, scan.m_max + 1, dtype=np.int64)
        counts = scan.counts
    else:
        m = scan.violations
        counts = np.zeros(m.size, dtype=np.int64)
    p = table.primes[m - 1]
    return Report.from_arrays(
        "theta",
        {
            "m": m,
            "p": p,
            "interval_end": (1.0 + scan.theta) * p,
            "primes_in_interval": counts,
        },
        {"theta": args.theta, "m_max": scan.m_max, "limit": args.limit},
    )


def _cmd_stats(args) -> Report:
    table = _load_table(args)
    sweep = stat_sweep(table, args.which, min_prime=args.min_prime)
    arrays: dict[str, np.ndarray] = {"n": sweep.n, "p": sweep.p, "p_next": sweep.p_next}
    arrays.update(sweep.columns)
    for name, arr in sweep.running_sup.items():
        arrays[f"sup_{name}"] = arr
    for name, arr in sweep.running_inf.items():
        arrays[f"inf_{name}"] = arr
    return Report.from_arrays(
        f"stats-{args.which}",
        arrays,
        {"which": args.which, "limit": args.limit, "min_prime": args.min_prime},
    )


def _cmd_comparison(args) -> Report:
    table = _load_table(args)
    data = comparison_sweep(table, args.k_min)
    return Report.from_arrays(
        "comparison", data, {"limit": args.limit, "k_min": args.k_min}
    )


_HANDLERS = {
    "fracint": _cmd_fracint,
    "zeta": _cmd_zeta,
    "gamma": _cmd_gamma,
    "sieve": _cmd_sieve,
    "gaps": _cmd_gaps,
    "rst": _cmd_rst,
    "residuals": _cmd_residuals,
    "assumptions": _cmd_assumptions,
    "theta": _cmd_theta,
    "stats": _cmd_stats,
    "comparison": _cmd_comparison,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage problems; our contract says 1
        return 0 if exc.code in (0, None) else 1

    started = time.perf_counter()
    try:
        report = _HANDLERS[args.subcommand](args)
        wall = time.perf_counter() - started if args.timing else None
        text = render(report, args.format, __version__, wall)
    except FracgapError as exc:
        print(f"fracgap: error: {exc}", file=sys.stderr)
        return 2
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
