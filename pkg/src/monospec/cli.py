"""Command-line interface.

Exit codes: 0 success, 2 usage/parameter error, 3 data error,
4 hard-assertion failure, 5 limit-theorem hypothesis violated.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import asymptotics, bench
from .errors import (DataError, DegenerateInputError, HardAssertionError, HypothesisError,
                     MonospecError)
from .estimators import estimate_fhat, estimate_ftilde
from .simgen import RngStream, model_to_dict, parse_model, simulate, spectral_density
from .spectrum import DETREND_MODES, periodogram

EXIT_USAGE, EXIT_DATA, EXIT_ASSERT, EXIT_HYPOTHESIS = 2, 3, 4, 5


class UsageError(MonospecError):
    pass


def fmt(x) -> str:
    return format(float(x), ".17g")


def _write_text(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="")


def _csv_text(header, rows, comments=()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else (str(v) if isinstance(v, (int, np.integer)) else fmt(v))
                    for v in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _model(args):
    example = getattr(args, "example", None)
    text = getattr(args, "model", None)
    if example is not None and text is not None:
        raise UsageError("give either --example or --model, not both")
    if example is not None:
        if str(example) in ("1", "2"):
            return parse_model(f"example{example}")
        return parse_model(str(example))
    if text is None:
        raise UsageError("a model is required (--model or --example)")
    if text.startswith("@"):
        text = Path(text[1:]).read_text(encoding="utf-8")
    return parse_model(text)


def _detrend(args) -> str:
    if getattr(args, "demean", False):
        if args.detrend not in (None, "mean"):
            raise UsageError("--demean conflicts with --detrend")
        return "mean"
    return args.detrend


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def read_series(path) -> np.ndarray:
    """Read a one-column CSV (optional header line, '#' comments)."""
    raw = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    values = []
    lines = [ln.strip() for ln in raw.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    for i, line in enumerate(lines):
        cell = line.split(",")[0].strip()
        try:
            values.append(float(cell))
        except ValueError:
            if i == 0:
                continue  # header
            raise DataError(f"non-numeric value {cell!r} on data row {i}") from None
    x = np.array(values)
    if x.size < 3:
        raise DataError("need at least three observations")
    if not np.all(np.isfinite(x)):
        raise DataError("series contains non-finite values")
    return x


# ------------------------------------------------------------------ commands

def cmd_simulate(args):
    model = _model(args)
    x = simulate(model, args.n, RngStream(args.seed), args.arfima_truncation)
    _write_text(args.out, _csv_text(["x"], ([v] for v in x)))


def cmd_estimate(args):
    model = None
    if args.input is not None:
        if args.model is not None or args.example is not None:
            raise UsageError("--input cannot be combined with a model")
        x = read_series(args.input)
    else:
        model = _model(args)
        if args.n is None:
            raise UsageError("--n is required with --model")
        x = simulate(model, args.n, RngStream(args.seed), args.arfima_truncation)
    pg = periodogram(x, detrend=_detrend(args))
    if args.estimator == "raw":
        columns = [pg.ordinates]
    elif args.estimator == "fhat":
        columns = [estimate_fhat(pg).levels]
    elif args.estimator == "ftilde":
        columns = [estimate_ftilde(pg).levels]
    else:
        columns = [estimate_fhat(pg).levels, estimate_ftilde(pg).levels]
    if args.estimator != "raw":
        for c in columns:
            if np.any(np.diff(c) > 0):
                raise HardAssertionError("fitted levels are not non-increasing")
    header = ["lambda", "level"] + (["level2"] if len(columns) == 2 else [])
    if model is not None:
        header.append("f")
        columns.append(spectral_density(model, pg.freqs))
    rows = zip(pg.freqs, *columns)
    _write_text(args.out, _csv_text(header, rows))


def cmd_bench(args):
    model = _model(args)
    example = int(args.example) if args.example in ("1", "2") else None
    n_list = _int_list(args.n_list)
    estimators = [e.strip() for e in args.estimators.split(",") if e.strip()]
    rows = bench.mise_table(model, n_list, args.reps, estimators, args.seed,
                            detrend=_detrend(args), threads=args.threads,
                            arfima_truncation=args.arfima_truncation)
    label = str(example) if example is not None else "custom"
    if args.format == "json":
        text = _json_text({
            "example": label,
            "model": model_to_dict(model),
            "seed": args.seed,
            "rows": [{"estimator": r.estimator, "n": r.n, "reps": r.reps,
                      "mise": r.mise, "mc_se": r.mc_se} for r in rows],
        })
    else:
        text = _csv_text(["example", "estimator", "n", "reps", "mise", "mc_se"],
                         ([label, r.estimator, r.n, r.reps, r.mise, r.mc_se] for r in rows))
    _write_text(args.out, text)
    if example is not None and args.out not in (None, "-"):
        ref = bench.PUBLISHED_MISE[example]
        print(f"{'estimator':>9} {'n':>6} {'mise':>10} {'mc_se':>9} {'published':>10}")
        for r in rows:
            pub = ref.get(r.estimator, {}).get(r.n)
            pub_s = f"{pub:10.3f}" if pub is not None else f"{'-':>10}"
            print(f"{r.estimator:>9} {r.n:>6} {r.mise:10.3f} {r.mc_se:9.3f} {pub_s}")


def cmd_limit_check(args):
    model = _model(args)
    exp = asymptotics.LimitExperiment(model, args.t0, args.n, args.reps, args.estimator,
                                      detrend=_detrend(args), arfima_truncation=args.arfima_truncation)
    master = RngStream(args.seed)
    errors = asymptotics.normalized_error_samples(exp, master.child(0), threads=args.threads)
    cfg = asymptotics.ChernoffSamplerConfig(args.chernoff_count, args.L, args.h)
    zeta = asymptotics.chernoff_sample(cfg, master.child(1))
    summary = asymptotics.limit_summary(errors, zeta)
    c_fhat = asymptotics.limit_constant_fhat(model, args.t0)
    c_ftilde = asymptotics.limit_constant_ftilde(model, args.t0)
    summary.update({
        "estimator": args.estimator,
        "t0": args.t0,
        "n": args.n,
        "reps": args.reps,
        "seed": args.seed,
        "constant": c_fhat if args.estimator == "fhat" else c_ftilde,
        "constant_fhat": c_fhat,
        "constant_ftilde": c_ftilde,
        "normalizer": exp.normalizer,
        "chernoff_count": cfg.sample_count,
    })
    if args.out in (None, "-"):
        _write_text(args.out, _json_text(summary))
        return
    out = Path(args.out)
    stem = out.with_suffix("")
    Path(f"{stem}.errors.csv").write_text(_csv_text(["normalized_error"], ([v] for v in errors)), newline="")
    Path(f"{stem}.chernoff.csv").write_text(_csv_text(["zeta"], ([v] for v in zeta)), newline="")
    _write_text(out, _json_text(summary))


def cmd_chernoff(args):
    if args.count < 1:
        raise UsageError("--count must be positive")
    cfg = asymptotics.ChernoffSamplerConfig(args.count, args.L, args.h)
    z = asymptotics.chernoff_sample(cfg, RngStream(args.seed))
    se = float(np.std(z, ddof=1) / math.sqrt(len(z))) if len(z) > 1 else float("nan")
    comments = [f"count={len(z)} L={cfg.half_width!r} h={cfg.step!r} seed={args.seed}",
                f"mean={fmt(np.mean(z))} se={fmt(se)}"]
    _write_text(args.out, _csv_text(["zeta"], ([v] for v in z), comments))


# -------------------------------------------------------------------- parser

def _add_model_flags(p, example=True):
    p.add_argument("--model", help="model JSON, alias (example1/example2) or @file")
    if example:
        p.add_argument("--example", help="built-in example: 1, 2 (or an alias)")


def _add_detrend_flags(p, default):
    p.add_argument("--detrend", choices=DETREND_MODES, default=default,
                   help=f"series preprocessing before the periodogram (default {default})")
    p.add_argument("--demean", action="store_true", help="subtract the sample mean (same as --detrend mean)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monospec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a sample path")
    _add_model_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--arfima-truncation", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="estimate a monotone spectral density")
    p.add_argument("--input", help="one-column CSV of observations ('-' for stdin)")
    _add_model_flags(p)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--estimator", choices=("fhat", "ftilde", "both", "raw"), default="fhat")
    p.add_argument("--arfima-truncation", type=int)
    _add_detrend_flags(p, "none")
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("bench", help="Monte Carlo MISE table")
    _add_model_flags(p)
    p.add_argument("--n-list", default="100,500,1000,5000")
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--estimators", default="raw,fhat,ftilde")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1, help="worker processes (0 = all cores)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--arfima-truncation", type=int)
    _add_detrend_flags(p, "linear")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("limit-check", help="compare normalized errors with Chernoff's law")
    _add_model_flags(p)
    p.add_argument("--estimator", choices=("fhat", "ftilde"), default="fhat")
    p.add_argument("--t0", type=float, default=1.0)
    p.add_argument("--n", type=int, default=8192)
    p.add_argument("--reps", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--chernoff-count", type=int, default=10_000)
    p.add_argument("--L", type=float, default=4.0)
    p.add_argument("--h", type=float, default=0.005)
    p.add_argument("--arfima-truncation", type=int)
    _add_detrend_flags(p, "none")
    p.add_argument("--out")
    p.set_defaults(func=cmd_limit_check)

    p = sub.add_parser("chernoff-sample", help="sample Chernoff's distribution")
    p.add_argument("--count", type=int, default=10_000)
    p.add_argument("--L", type=float, default=4.0)
    p.add_argument("--h", type=float, default=0.005)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_chernoff)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except HypothesisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except HardAssertionError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    except (DataError, DegenerateInputError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (MonospecError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
