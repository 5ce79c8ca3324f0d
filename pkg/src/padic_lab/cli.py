"""Command-line driver: ``padic-lab <experiment> [options]``.

Exit status: 0 all exact checks pass, 1 a violation was found, 2 usage or
config error, 3 precision-inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import fields
from fractions import Fraction

from .experiments import EXPERIMENTS, ExperimentConfig, run, to_jsonable
from .padics import PrecisionError

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


def _precision(s: str) -> tuple[int, int]:
    try:
        a, b = s.split(",")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError("expected N,M (two integers)") from None


def _fraction(s: str) -> str:
    try:
        Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from None
    return s


def _add_common(sp: argparse.ArgumentParser):
    sp.add_argument("--p", type=int, help="residue characteristic")
    sp.add_argument("--field", default="qp", help="qp | eisenstein:<poly in t> | unramified:<poly in t>")
    sp.add_argument("--precision", type=_precision, metavar="N,M", help="p-precision N and X-order M")
    sp.add_argument("--nmax", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="output file (default: stdout)")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--P", dest="P", choices=("cyclotomic", "standard"), help="LT-like series to use")
    sp.add_argument("--deg", type=int, help="degree bound for random polynomials")
    sp.add_argument("--K", type=int, help="scan / table length")
    sp.add_argument("--eps", type=_fraction)
    sp.add_argument("--m", type=int)
    sp.add_argument("--lam", type=_fraction)
    sp.add_argument("--raise-m", action="store_true", help="raise m until l(n) <= n-1 for n > m")
    sp.add_argument("--level", type=int)
    sp.add_argument("--roundtrip", action="store_true", help="accepted for readability; round trips always run")
    sp.add_argument("--gap-tol", type=_fraction)
    sp.add_argument("--gap-frac", type=_fraction)
    sp.add_argument("--inconclusive-rate", type=_fraction)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="padic-lab", description="Exact p-adic experiments.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="<experiment>")
    for name, ex in EXPERIMENTS.items():
        sp = sub.add_parser(name, help=ex.statement)
        _add_common(sp)
    sub.add_parser("list", help="list experiments")
    d = sub.add_parser("describe", help="describe one experiment")
    d.add_argument("experiment")
    return ap


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig(name=args.command)
    known = {f.name for f in fields(ExperimentConfig)}
    for k, v in vars(args).items():
        if k in ("command", "precision", "out", "format", "roundtrip") or v is None or v is False:
            continue
        if k in known:
            setattr(cfg, k, v)
    if args.precision:
        cfg.N, cfg.M = args.precision
    if cfg.p is not None and cfg.p < 2:
        raise ConfigError("--p: must be a prime >= 2")
    if cfg.p is not None and any(cfg.p % d == 0 for d in range(2, int(cfg.p**0.5) + 1)):
        raise ConfigError(f"--p: {cfg.p} is not prime")
    if cfg.N <= 0 or cfg.M <= 0:
        raise ConfigError("--precision: N and M must be positive")
    for k in ("nmax", "samples", "K", "level"):
        v = getattr(cfg, k)
        if v is not None and v < 0:
            raise ConfigError(f"--{k}: must be non-negative")
    return cfg


def render(report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_json(), indent=2) + "\n"
    rows = to_jsonable(report.rows)
    cols: list = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue()


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    if args.command == "list":
        for name, ex in EXPERIMENTS.items():
            print(f"{name:18s} {ex.statement}")
        return EXIT_OK
    if args.command == "describe":
        ex = EXPERIMENTS.get(args.experiment)
        if ex is None:
            print(f"unknown experiment {args.experiment!r}", file=sys.stderr)
            return EXIT_USAGE
        print(f"{args.experiment}: {ex.statement}\n  checks: {ex.check}")
        return EXIT_OK
    try:
        cfg = config_from_args(args)
        report = run(cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionError as e:
        print(f"inconclusive: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (ValueError, NotImplementedError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_USAGE
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"{report.name}: {report.status}")
    else:
        sys.stdout.write(text)
    return report.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
