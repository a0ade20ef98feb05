"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 numeric failure (non-finite
result), 3 cache corruption.  All subcommands emit delimited or JSON
reports; figures are rendered only by `report`.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import cache
from .arith import (build_factor_table, divisor_spec, evaluate_multiplicative,
                    one_spec, sieve_primes)
from .cache import CacheError
from .catalog import f_theta_spec, lambda_alpha_spec, r_quarter_spec, tau_table
from .dirichlet import (build_ladder, decomposition_check, halasz_sup_ratio,
                        large_sieve_harness, perron_window_check)
from .hooley import hooley_interval_experiment
from .pretentious import euler_products, minimize_t0
from .report import ExperimentReport
from .rng import DEFAULT_SEED
from .satotate import moment_constants, pnt_rs_ratio, quant_st_check
from .short_interval import variance_mrfull
from .smooth import dickman_rho, psi_smooth

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_CACHE = 3


class NumericFailure(Exception):
    pass


def _load_config(path: str) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {line!r}")
        key, _, val = line.partition("=")
        out[key.strip()] = val.strip()
    return out


def _spec_for(name: str, xmax: int, cusp_table=None):
    """Resolve a function name to a MultiplicativeSpec."""
    if name == "one":
        return one_spec(), cusp_table
    if name.startswith("d") and name[1:].replace(".", "").isdigit():
        return divisor_spec(float(name[1:])), cusp_table
    if name == "rquarter":
        return r_quarter_spec(), cusp_table
    if name.startswith("ftheta"):
        theta = float(name[len("ftheta"):] or "0.1")
        return f_theta_spec(theta), cusp_table
    if name.startswith("lambda"):
        alpha = float(name[len("lambda"):] or "2")
        if cusp_table is None or cusp_table.limit < xmax:
            cusp_table = _tau_with_cache(xmax)
        return lambda_alpha_spec(cusp_table, alpha), cusp_table
    raise ValueError(f"unknown function name {name!r}")


def _tau_with_cache(xmax: int):
    path = cache.cache_dir() / f"tau_{xmax}.mfsi"
    if path.exists():
        return cache.load_tau(path)
    table = tau_table(xmax)
    cache.save_tau(table, path)
    return table


def _emit(report: ExperimentReport, args) -> None:
    text = report.to_json() if getattr(args, "format", "csv") == "json" \
        else report.to_csv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _check_finite(report: ExperimentReport) -> None:
    import numbers
    for row in report.rows:
        for v in row:
            if isinstance(v, numbers.Real) and not math.isfinite(float(v)):
                raise NumericFailure(f"non-finite value in report: {v!r}")


def cmd_sieve(args) -> int:
    pt = sieve_primes(args.xmax)
    if args.cache:
        ft = build_factor_table(args.xmax)
        cache.save_spf(ft, cache.cache_dir() / f"spf_{args.xmax}.mfsi")
    rep = ExperimentReport(command="sieve", seed=args.seed,
                           columns=["xmax", "pi"])
    rep.add_row(args.xmax, len(pt.primes))
    _check_finite(rep)
    _emit(rep, args)
    return EXIT_OK


def cmd_tau(args) -> int:
    table = _tau_with_cache(args.xmax)
    rep = ExperimentReport(command="tau", seed=args.seed,
                           columns=["n", "tau"])
    for n in range(1, min(10, args.xmax) + 1):
        rep.add_row(n, int(table.tau[n]))
    if args.verify:
        if int(table.tau[2]) != -24 or int(table.tau[3]) != 252:
            raise NumericFailure("tau verification failed")
    _emit(rep, args)
    return EXIT_OK


def cmd_variance(args) -> int:
    spec, cusp = _spec_for(args.function, args.xmax)
    ft = build_factor_table(args.xmax)
    pt = sieve_primes(args.xmax)
    values = evaluate_multiplicative(spec, ft)
    rep = ExperimentReport(command="variance", seed=args.seed,
                           columns=["h0", "h", "variance", "envelope",
                                    "trivial_bound"])
    for h0 in (float(s) for s in args.h0.split(",")):
        vr = variance_mrfull(spec, values, args.xmax, h0, pt, t0=args.t0,
                             samples=args.samples, seed=args.seed)
        rep.add_row(h0, vr.h, vr.variance, vr.rhs_envelope, vr.trivial_bound)
    _check_finite(rep)
    _emit(rep, args)
    return EXIT_OK


def cmd_pretend(args) -> int:
    spec, _ = _spec_for(args.function, args.xmax)
    pt = sieve_primes(args.xmax)
    prof = minimize_t0(spec, args.xmax, args.tmax, pt)
    ep = euler_products(spec, args.xmax, pt)
    rep = ExperimentReport(command="pretend", seed=args.seed,
                           columns=["t0", "min_rho_sq", "grid_step",
                                    "H", "P", "H_equiv"])
    rep.add_row(prof.t0, prof.M, prof.grid_step, ep.H, ep.P, ep.H_equiv)
    _check_finite(rep)
    _emit(rep, args)
    return EXIT_OK


def cmd_dirichlet(args) -> int:
    rep = ExperimentReport(command=f"dirichlet-{args.check}", seed=args.seed,
                           columns=[], rows=[])
    if args.check == "perron":
        ft = build_factor_table(args.xmax)
        values = evaluate_multiplicative(divisor_spec(2), ft)
        h = args.xmax / 100
        T = (args.xmax / h) * math.log(args.xmax) ** 2
        res = perron_window_check(values, 0.9 * args.xmax, h, T)
        rep.columns = ["x", "h", "T_trunc", "exact_re", "perron_re", "rel_err"]
        rep.add_row(0.9 * args.xmax, h, T, res.exact.real, res.perron.real,
                    res.rel_err)
    elif args.check == "ladder":
        lad = build_ladder(max(args.xmax ** 0.25, 10.0), args.xmax, 1.0, 0.05)
        rep.columns = ["j", "logP", "logQ", "logH", "alpha", "in_range"]
        for j in range(len(lad.logQ)):
            rep.add_row(j + 1, lad.logP[j], lad.logQ[j], lad.logH[j],
                        lad.alpha[j], j < lad.J)
    elif args.check == "ls":
        rep.columns = ["kind", "N", "max_constant"]
        for kind in ("LSInts-a", "LSInts-b", "LSInts-c", "LSPrim-a",
                     "LSPrim-b", "MixedMom"):
            out = large_sieve_harness(kind, trials=args.trials, seed=args.seed)
            for N, c in zip(out.sizes, out.max_constants):
                rep.add_row(kind, N, c)
    elif args.check == "decomp":
        ft = build_factor_table(args.xmax)
        pt = sieve_primes(args.xmax)
        spec = divisor_spec(2)
        values = evaluate_multiplicative(spec, ft)
        res = decomposition_check(spec, values, args.xmax, 11, 31, 8, pt)
        rep.columns = ["t", "lemma_ratio", "identity_defect", "defect_bound"]
        for t, r in zip(res.t_grid, res.lemma_ratios):
            rep.add_row(t, r, res.identity_defect, res.defect_bound)
    elif args.check == "halasz":
        ft = build_factor_table(args.xmax)
        pt = sieve_primes(args.xmax)
        spec = divisor_spec(2)
        values = evaluate_multiplicative(spec, ft)
        res = halasz_sup_ratio(spec, values, args.xmax, 11, 31, 2.0, pt)
        rep.columns = ["Z", "sup_value", "envelope", "ratio", "u_at_sup"]
        rep.add_row(res.Z, res.sup_value, res.envelope, res.ratio, res.u_at_sup)
    _emit(rep, args)
    return EXIT_OK


def cmd_smooth(args) -> int:
    rep = ExperimentReport(command="smooth", seed=args.seed, columns=[])
    if args.psi:
        ft = build_factor_table(args.xmax)
        spec, _ = _spec_for(args.function, args.xmax)
        out = psi_smooth(args.xmax, args.y, spec, ft)
        rep.columns = ["x", "y", "u", "psi", "G1y", "predicted", "ratio"]
        rep.add_row(out.x, out.y, out.u, out.psi, out.G1y, out.predicted,
                    out.ratio)
    else:
        grid = dickman_rho(args.k, u_max=args.umax)
        rep.columns = ["u", "rho"]
        step = max(1, int(round(0.25 / grid.step)))
        for i in range(0, len(grid.values), step):
            rep.add_row(i * grid.step, grid.values[i])
    _check_finite(rep)
    _emit(rep, args)
    return EXIT_OK


def cmd_satotate(args) -> int:
    table = _tau_with_cache(args.xmax)
    pt = sieve_primes(args.xmax)
    rep = ExperimentReport(command="satotate", seed=args.seed,
                           columns=["metric", "a", "b", "value"])
    for a_str in args.alpha.split(","):
        mc = moment_constants(float(a_str))
        rep.add_row("c_alpha", float(a_str), 0.0, mc.c_alpha)
        rep.add_row("d_alpha", float(a_str), 0.0, mc.d_alpha)
    intervals = []
    for part in args.intervals.split(","):
        a, _, b = part.partition(":")
        intervals.append((float(a), float(b)))
    for r in quant_st_check(table, args.xmax, intervals, pt):
        rep.add_row("discrepancy", r.a, r.b, r.discrepancy)
    rep.add_row("pnt_rs_ratio", 0.0, 0.0, pnt_rs_ratio(table, args.xmax, pt))
    _check_finite(rep)
    _emit(rep, args)
    return EXIT_OK


def cmd_hooley(args) -> int:
    ft = build_factor_table(args.xmax)
    rep = ExperimentReport(command="hooley", seed=args.seed,
                           columns=["metric", "value"])
    res = hooley_interval_experiment(args.xmax, args.delta, args.h0, ft,
                                     samples=args.samples, seed=args.seed)
    rep.add_row("long_average", res.long_average)
    rep.add_row("median_ratio", res.median_ratio)
    rep.add_row("min_window_average", res.min_average)
    for th, frac in sorted(res.threshold_fractions.items()):
        rep.add_row(f"fraction_ge_{th:g}", frac)
    _check_finite(rep)
    _emit(rep, args)
    return EXIT_OK


def cmd_report(args) -> int:
    from .plots import render_csv
    written = render_csv(args.csv, outdir=args.outdir, logx=args.logx,
                         logy=args.logy)
    for path in written:
        sys.stdout.write(str(path) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfsi",
                                     description="multiplicative functions in "
                                     "short intervals: desk-scale experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value defaults file")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--threads", type=int, default=1,
                       help="worker cap; 1 guarantees bit-reproducibility")
        p.add_argument("--out", help="write report to this path")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("sieve", help="prime counts; optional spf cache")
    p.add_argument("--xmax", type=int, default=None)
    p.add_argument("--cache", action="store_true")
    common(p)
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("tau", help="cusp-form coefficient table")
    p.add_argument("--xmax", type=int, default=None)
    p.add_argument("--verify", action="store_true")
    common(p)
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("variance", help="short-interval variance")
    p.add_argument("--function", default=None)
    p.add_argument("--xmax", type=int, default=None)
    p.add_argument("--h0", default=None, help="comma-separated h0 list")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_variance)

    p = sub.add_parser("pretend", help="distance minimizer and Euler products")
    p.add_argument("--function", default=None)
    p.add_argument("--xmax", type=int, default=None)
    p.add_argument("--tmax", type=float, default=10.0)
    common(p)
    p.set_defaults(func=cmd_pretend)

    p = sub.add_parser("dirichlet", help="polynomial harnesses")
    p.add_argument("--check", default=None,
                   choices=("perron", "decomp", "ls", "halasz", "ladder"))
    p.add_argument("--xmax", type=int, default=10**4)
    p.add_argument("--trials", type=int, default=10)
    common(p)
    p.set_defaults(func=cmd_dirichlet)

    p = sub.add_parser("smooth", help="Dickman grids and smooth sums")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--umax", type=float, default=10.0)
    p.add_argument("--psi", action="store_true")
    p.add_argument("--xmax", type=int, default=10**4)
    p.add_argument("--y", type=float, default=100.0)
    p.add_argument("--function", default="one")
    common(p)
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("satotate", help="equidistribution and moments")
    p.add_argument("--xmax", type=int, default=None)
    p.add_argument("--alpha", default="1,2,4")
    p.add_argument("--intervals", default="-2:2,0:2,-1:1")
    common(p)
    p.set_defaults(func=cmd_satotate)

    p = sub.add_parser("hooley", help="divisor-concentration experiment")
    p.add_argument("--xmax", type=int, default=None)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--h0", type=float, default=50.0)
    p.add_argument("--samples", type=int, default=4096)
    common(p)
    p.set_defaults(func=cmd_hooley)

    p = sub.add_parser("report", help="render figures from a report CSV")
    p.add_argument("--csv", default=None)
    p.add_argument("--outdir", default=None)
    p.add_argument("--logx", action="store_true")
    p.add_argument("--logy", action="store_true")
    common(p)
    p.set_defaults(func=cmd_report)
    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.config:
        try:
            conf = _load_config(args.config)
        except (OSError, ValueError) as exc:
            sys.stderr.write(f"config error: {exc}\n")
            return EXIT_USAGE
        for key, val in conf.items():
            if hasattr(args, key) and getattr(args, key) is None:
                for cast in (int, float, str):
                    try:
                        setattr(args, key, cast(val))
                        break
                    except ValueError:
                        continue
    for key in ("xmax", "function", "h0", "check", "csv"):
        if hasattr(args, key) and getattr(args, key) is None:
            sys.stderr.write(f"missing required option --{key}\n")
            return EXIT_USAGE
    try:
        return args.func(args)
    except CacheError as exc:
        sys.stderr.write(f"cache error: {exc}\n")
        return EXIT_CACHE
    except NumericFailure as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return EXIT_NUMERIC
    except (ValueError, ArithmeticError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
