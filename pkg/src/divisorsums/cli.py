"""Command-line entry point: ``divisorsums <subcommand> [flags]``.

Exit status is 0 on success, 1 on a computation error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import arith, dense, edf, means, moments, series
from .numeric import parse_fraction, parse_int


def _int_arg(text: str) -> int:
    try:
        return parse_int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _positive_int(text: str) -> int:
    v = _int_arg(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text}")
    return v


def _fraction_arg(text: str):
    try:
        return parse_fraction(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(parse_fraction(s)) for s in text.split(",") if s.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _cols(header) -> str:
    return ",".join(header)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divisorsums",
        description="Divisor sums of the sum-of-proper-divisors function: sieves, density certificates, "
        "distribution, mean-value and moment diagnostics.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--threads", type=_positive_int, default=1, help="sieve worker threads")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "sieve",
        parents=[common],
        help="exact table of sigma, s, S_sigma, S_s, phi",
        epilog=f"CSV columns: {_cols(arith.CSV_HEADER)}. JSON: {{lo, hi, rows: [[{_cols(arith.CSV_HEADER)}], ...]}}",
    )
    p.add_argument("--limit", type=_positive_int, required=True, help="last n (inclusive)")
    p.add_argument("--lo", type=_positive_int, default=1, help="first n (default 1)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser(
        "edf",
        parents=[common],
        help="empirical distribution of S_s(n)/n",
        epilog=f"--grid CSV columns: {_cols(edf.GRID_HEADER)}. --eps CSV columns: {_cols(edf.CLUSTER_HEADER)}.",
    )
    p.add_argument("--limit", type=_positive_int, required=True, help="sample n <= limit")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--grid", help="lo:hi:step grid of x values for F_N(x)")
    g.add_argument("--eps", type=_float_list, help="comma list of window half-widths for the cluster report")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser(
        "dense",
        parents=[common],
        help="certificate that S_s(N)/N comes within eps of a target",
        epilog="JSON fields: target, epsilon, bootstrap_primes, "
        "steps[]={B_num,B_den,q,r_num,r_den,gap_num,gap_den}, terminal_gap_num, terminal_gap_den, primality. "
        "CSV columns: step,B,q,r,gap.",
    )
    p.add_argument("--target", type=_fraction_arg, required=True, help="x >= 0 (rational, e.g. 3/7 or 2.718)")
    p.add_argument("--eps", type=_fraction_arg, required=True, help="tolerance > 0")
    p.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser(
        "mean",
        parents=[common],
        help="running means against their zeta(2) limits",
        epilog=f"CSV columns: {_cols(means.CSV_HEADER)}.",
    )
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--checkpoints", help="comma list of x, or decades:<lo>:<hi>")
    g.add_argument("--limit", type=_positive_int, help="single checkpoint x")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser(
        "moments",
        parents=[common],
        help="moments of S_s(n)/n (Euler product and empirical)",
        epilog="--k JSON: {k, x, empirical, euler, terms:[{j, binom, sign, mean, tail}], truncation:{P, V, tail}}. "
        f"--kmax CSV columns: {_cols(moments.GROWTH_HEADER)}.",
    )
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=_positive_int, help="moment order for the binomial/Euler report")
    g.add_argument("--kmax", type=_positive_int, help="largest k of the growth table (>= 4)")
    p.add_argument("--limit", type=_positive_int, help="x for the empirical moments")
    p.add_argument("--euler-primes", type=_positive_int, default=moments.DEFAULT_EULER_PRIMES)
    p.add_argument("--euler-nu", type=_positive_int, default=moments.DEFAULT_EULER_NU)
    p.add_argument("--format", choices=("csv", "json"), default=None)

    p = sub.add_parser(
        "series",
        parents=[common],
        help="Erdos-Wintner and Wintner series over primes",
        epilog=f"CSV columns: {_cols(series.CSV_HEADER)}. "
        f"Functions: {', '.join(sorted(series.ADDITIVE_AT_PRIMES))}.",
    )
    p.add_argument("--function", help="additive function for the Erdos-Wintner series")
    p.add_argument("--radius", type=float, default=1.0, help="R of the Erdos-Wintner series")
    p.add_argument("--k", type=_int_arg, help="Wintner check for h_{k,j}")
    p.add_argument("--j", type=_int_arg, help="Wintner check for h_{k,j}")
    p.add_argument("--limit", type=_positive_int, default=10**7, help="largest prime bound")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("verify", parents=[common], help="re-check a dense certificate")
    p.add_argument("--cert", required=True, help="certificate JSON file ('-' for stdin)")
    return parser


def _cmd_sieve(a) -> str:
    if a.lo > a.limit:
        raise ValueError("--lo must not exceed --limit")
    table = arith.sieve_range(a.lo, a.limit, threads=a.threads)
    if a.format == "csv":
        return table.to_csv()
    rows = [list(table.row(n)) for n in range(a.lo, a.limit + 1)]
    return json.dumps({"lo": a.lo, "hi": a.limit, "rows": rows}) + "\n"


def _cmd_edf(a) -> str:
    sample = edf.build_edf(a.limit)
    buf = io.StringIO()
    if a.grid:
        grid = edf.parse_grid(a.grid)
        if a.format == "json":
            vals = edf.edf_at(sample, grid)
            return json.dumps({"N": a.limit, "x": grid.tolist(), "F_N": vals.tolist()}) + "\n"
        edf.write_grid_csv(sample, grid, buf)
        return buf.getvalue()
    reports = [edf.max_jump(sample, e) for e in a.eps]
    if a.format == "json":
        return json.dumps([{"N": a.limit, **r.__dict__} for r in reports]) + "\n"
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(edf.CLUSTER_HEADER)
    for r in reports:
        w.writerow((a.limit, repr(r.epsilon), repr(r.max_window_density), repr(r.argmax_center)))
    return buf.getvalue()


def _cmd_dense(a) -> str:
    if a.target < 0:
        raise ValueError("target must be >= 0")
    cert = dense.approximate_zero(a.eps) if a.target == 0 else dense.approximate(a.target, a.eps)
    if a.format == "json":
        return cert.dumps() + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("step", "B", "q", "r", "gap"))
    for i, s in enumerate(cert.steps):
        w.writerow((i, str(s.B), s.q, str(s.r_after), str(s.gap_after)))
    return buf.getvalue()


def _cmd_mean(a) -> str:
    xs = means.parse_checkpoints(a.checkpoints) if a.checkpoints else [a.limit]
    rows = means.mean_checkpoints(xs)
    if a.format == "json":
        return json.dumps([dict(zip(means.CSV_HEADER, r.csv_row())) for r in rows]) + "\n"
    buf = io.StringIO()
    means.write_csv(rows, buf)
    return buf.getvalue()


def _cmd_moments(a) -> str:
    if a.k is not None:
        if a.format == "csv":
            raise ValueError("--k reports are JSON only")
        report = moments.moment_via_binomial(a.k, a.euler_primes, a.euler_nu, a.limit)
        return report.dumps() + "\n"
    x = a.limit or 10**6
    rows = moments.moment_growth_check(a.kmax, x)
    flags = moments.growth_flags(rows)
    if a.format == "json":
        return json.dumps({"x": x, "rows": [r.__dict__ for r in rows], "rising": flags}) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(moments.GROWTH_HEADER)
    for r in rows:
        w.writerow(
            (r.k, repr(r.mu_k), repr(r.mu_k_at_x_over_10), repr(r.log_ratio), repr(r.carleman_ratio), repr(r.phi_bound_2k))
        )
    return buf.getvalue()


def _cmd_series(a) -> str:
    if (a.function is None) == (a.k is None):
        raise _UsageError("give either --function or --k/--j")
    if a.function is not None:
        if a.function not in series.ADDITIVE_AT_PRIMES:
            raise _UsageError(f"unknown --function {a.function!r}")
        bounds = [b for b in series.DEFAULT_BOUNDS if b < a.limit] + [a.limit]
        diags = series.erdos_wintner_diagnostic(a.function, a.radius, bounds)
        extra = {}
    else:
        if a.j is None:
            raise _UsageError("--k needs --j")
        rep = series.wintner_condition_check(a.k, a.j, a.limit)
        diags = [rep.condition_i, rep.condition_ii]
        extra = {"fitted_C": rep.fitted_C, "late_ok": rep.late_ok, "inner_decay_exponent": rep.inner_decay_exponent}
    if a.format == "json":
        return (
            json.dumps(
                {
                    "series": [
                        {"series": d.series, "bounds": list(d.bounds), "partial_sums": list(d.partial_sums), "trend": d.trend}
                        for d in diags
                    ],
                    **extra,
                }
            )
            + "\n"
        )
    buf = io.StringIO()
    series.write_csv(diags, buf)
    return buf.getvalue()


def _cmd_verify(a) -> str:
    text = sys.stdin.read() if a.cert == "-" else open(a.cert, encoding="utf-8").read()
    try:
        cert = dense.DenseCertificate.loads(text)
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as e:
        raise ValueError(f"malformed certificate: {e}") from None
    result = dense.verify_certificate(cert)
    if not result:
        raise _VerifyFailed(result.message)
    return "ok\n"


class _UsageError(Exception):
    pass


class _VerifyFailed(Exception):
    pass


_COMMANDS = {
    "sieve": _cmd_sieve,
    "edf": _cmd_edf,
    "dense": _cmd_dense,
    "mean": _cmd_mean,
    "moments": _cmd_moments,
    "series": _cmd_series,
    "verify": _cmd_verify,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        text = _COMMANDS[args.command](args)
    except _UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"divisorsums {args.command}: error: {e}", file=sys.stderr)
        return 2
    except _VerifyFailed as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError, AssertionError, OSError) as e:
        print(f"divisorsums {args.command}: {e}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())
