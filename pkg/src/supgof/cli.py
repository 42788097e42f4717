"""Command-line interface: test execution, critical-value tables, CDF
evaluation, and Monte-Carlo experiments with CSV/JSON output.

Exit codes: 0 success, 2 rejection (only with --exitcode), 64 input error,
65 capability error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import asymptotic, critical, exact, mc
from .distfn import parse_model, pit, read_sample_csv
from .errors import CapabilityError
from .statistics import StatKind

EXIT_OK = 0
EXIT_REJECT = 2
EXIT_INPUT = 64
EXIT_CAPABILITY = 65

TABLE_NS = (30, 50, 100, 500, 1000)
TABLE_KINDS = (StatKind.SMIRNOV_ARGMAX, StatKind.SMIRNOV, StatKind.MS_ONESIDED)


def _fmt(value, precision: int) -> str:
    if isinstance(value, bool) or value is None:
        return str(value)
    return f"{value:.{precision}g}"


def _round_sig(value: float | None, precision: int):
    if value is None:
        return None
    return float(f"{value:.{precision}g}")


def _parse_grid(text: str) -> np.ndarray:
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"grid must be lo:hi:step, got {text!r}") from exc
    if step <= 0:
        raise argparse.ArgumentTypeError("grid step must be positive")
    return np.arange(lo, hi + step / 2.0, step)


def _parse_sizes(text: str) -> list:
    out = []
    for tok in text.split(","):
        tok = tok.strip().lower()
        out.append(math.inf if tok in ("inf", "infinity") else int(tok))
    return out


def _cache() -> critical.CriticalValueCache:
    return critical.CriticalValueCache(critical.default_cache_path())


def _workers(args) -> int:
    if getattr(args, "workers", None):
        return args.workers
    return int(os.environ.get("GOF_WORKERS", "1"))


def cmd_test(args) -> int:
    raw = read_sample_csv(args.data)
    model = parse_model(args.f0)
    sample = pit(raw, model)
    spec = critical.TestSpec(StatKind(args.stat), sample.n, args.alpha,
                             critical.Method(args.method),
                             mc_reps=args.reps, mc_seed=args.seed)
    report = critical.run_test(spec, sample, cache=_cache())
    payload = report.to_dict()
    for key in ("value", "critical_value", "p_value", "argmax_location"):
        payload[key] = _round_sig(payload[key], args.precision)
    print(json.dumps(payload))
    if args.exitcode and report.reject:
        return EXIT_REJECT
    return EXIT_OK


def _one_critical(kind: StatKind, n, alpha: float, method: str | None,
                  cache) -> tuple[str, float]:
    if n is math.inf or method == "asymptotic":
        spec = critical.TestSpec(kind, 30 if n is math.inf else n, alpha,
                                 critical.Method.ASYMPTOTIC)
        return "asymptotic", critical.asymptotic_critical(spec)
    spec = critical.TestSpec(kind, n, alpha, critical.Method.EXACT)
    return "exact", critical.exact_critical(spec, cache)


def cmd_critval(args) -> int:
    cache = _cache()
    print("stat,n,alpha,method,value")
    for n in _parse_sizes(args.n):
        method, value = _one_critical(StatKind(args.stat), n, args.alpha,
                                      args.method, cache)
        label = "inf" if n is math.inf else str(n)
        print(f"{args.stat},{label},{_fmt(args.alpha, args.precision)},"
              f"{method},{_fmt(value, args.precision)}")
    return EXIT_OK


def cmd_table1(args) -> int:
    cache = _cache()
    print("stat,n,alpha,method,value")
    for n in (*TABLE_NS, math.inf):
        for kind in TABLE_KINDS:
            method, value = _one_critical(kind, n, args.alpha, None, cache)
            label = "inf" if n is math.inf else str(n)
            print(f"{kind.value},{label},{_fmt(args.alpha, args.precision)},"
                  f"{method},{_fmt(value, args.precision)}")
    return EXIT_OK


def _cdf_function(args):
    kind = StatKind(args.stat)
    n = args.n
    if args.asymptotic:
        method = critical.Method.ASYMPTOTIC
    else:
        method = critical.Method.EXACT if kind in critical.EXACT_KINDS else critical.Method.ASYMPTOTIC
    if kind is StatKind.MS_ONESIDED and args.weight is not None:
        if method is critical.Method.EXACT:
            return lambda t: exact.tnplus_cdf(n, t, args.weight) if t > 0 else 0.0
        w = args.weight
        return lambda t: (asymptotic.ms_limit(t / w, t, t / w, one_sided=True)
                          if t > w else 0.0)
    spec = critical.TestSpec(kind, n if n else 30, args.alpha, method)
    return critical.null_cdf(spec)


def cmd_cdf(args) -> int:
    fn = _cdf_function(args)
    if args.x is not None:
        print(_fmt(fn(args.x), args.precision))
        return EXIT_OK
    print("x,cdf")
    for x in args.grid:
        print(f"{_fmt(x, args.precision)},{_fmt(fn(float(x)), args.precision)}")
    return EXIT_OK


def cmd_power(args) -> int:
    cfg = mc.MCConfig(args.reps, args.seed, _workers(args))
    curve = mc.power_curve(args.n, args.alpha, args.tau, args.delta, cfg,
                           cache=_cache())
    p = args.precision
    print("delta,power_N,se_N,power_S,se_S,power_MS,se_MS")
    for i, d in enumerate(curve.delta_grid):
        cells = [_fmt(d, p)]
        for name in ("N", "S", "MS"):
            cells.append(_fmt(curve.power[name][i], p))
            cells.append(_fmt(curve.stderr[name][i], p))
        print(",".join(cells))
    return EXIT_OK


def cmd_type1(args) -> int:
    spec = critical.TestSpec(StatKind(args.stat), args.n, args.alpha,
                             critical.Method.ASYMPTOTIC)
    cfg = mc.MCConfig(args.reps, args.seed, _workers(args))
    rate, se = mc.type_one_error(spec, cfg)
    p = args.precision
    print("stat,n,alpha,reps,rate,stderr")
    print(f"{args.stat},{args.n},{_fmt(args.alpha, p)},{args.reps},"
          f"{_fmt(rate, p)},{_fmt(se, p)}")
    return EXIT_OK


def cmd_figure1(args) -> int:
    n = args.n
    rootn = math.sqrt(n)
    print("x,exact,limit")
    sup = 0.0
    for x in args.grid:
        hn = exact.wstar_cdf(n, float(x) / rootn)
        h = asymptotic.maxwell_cdf(float(x))
        sup = max(sup, abs(hn - h))
        print(f"{_fmt(x, args.precision)},{_fmt(hn, args.precision)},"
              f"{_fmt(h, args.precision)}")
    print(f"# sup_abs_diff = {_fmt(sup, args.precision)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="supgof",
        description="Supremum-type goodness-of-fit tests with exact and "
                    "asymptotic null distributions.")
    parser.add_argument("--precision", type=int, default=6,
                        help="significant digits in numeric output (default 6)")
    sub = parser.add_subparsers(dest="command", required=True)
    stat_names = [k.value for k in StatKind]

    p = sub.add_parser("test", help="run a goodness-of-fit test on a data file")
    p.add_argument("--data", required=True, help="CSV file, one value per line")
    p.add_argument("--f0", required=True,
                   help="model: uniform:a,b | normal:mu,sigma | exp:lambda | pwl:file.csv")
    p.add_argument("--stat", required=True, choices=stat_names)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--method", choices=[m.value for m in critical.Method], default="exact")
    p.add_argument("--reps", type=int, default=100_000, help="replicates for --method mc")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exitcode", action="store_true",
                   help="exit with status 2 when the test rejects")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("critval", help="critical values for chosen sample sizes")
    p.add_argument("--stat", required=True, choices=stat_names)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--n", required=True, help="comma-separated sizes; 'inf' allowed")
    p.add_argument("--method", choices=["exact", "asymptotic"], default=None)
    p.set_defaults(func=cmd_critval)

    p = sub.add_parser("table1", help="critical-value grid for the three "
                                      "one-sided tests at n=30..1000 and inf")
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("cdf", help="evaluate a null CDF at a point or grid")
    p.add_argument("--stat", required=True, choices=stat_names)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--grid", type=_parse_grid, default=None)
    p.add_argument("--asymptotic", action="store_true")
    p.add_argument("--alpha", type=float, default=0.05,
                   help="level used to derive the combined-statistic weight")
    p.add_argument("--weight", type=float, default=None,
                   help="explicit weight for the combined statistic")
    p.set_defaults(func=cmd_cdf)

    p = sub.add_parser("power", help="Monte-Carlo power curve of the three "
                                     "one-sided tests under the polygonal alternative")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--tau", type=float, default=0.05)
    p.add_argument("--delta", type=_parse_grid, default=_parse_grid("1:19:0.5"))
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("type1", help="Monte-Carlo type-I error of an "
                                     "asymptotically calibrated test")
    p.add_argument("--stat", default=StatKind.WEIGHTED_SMIRNOV.value, choices=stat_names)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_type1)

    p = sub.add_parser("figure1", help="exact vs limit CDF of the sqrt(n)-scaled "
                                       "argmax-rescaled one-sided statistic")
    p.add_argument("--n", type=int, default=15)
    p.add_argument("--grid", type=_parse_grid, default=_parse_grid("0:4:0.02"))
    p.set_defaults(func=cmd_figure1)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except argparse.ArgumentError:
        return EXIT_INPUT
    if getattr(args, "x", "absent") is None and getattr(args, "grid", "absent") is None:
        print("error: cdf needs --x or --grid", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except CapabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
