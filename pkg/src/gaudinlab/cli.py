"""Command line interface: ``gaudinlab <experiment> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cache import CACHE_ENV, cache_gc, default_cache_dir
from .config import EXPERIMENTS, ConfigError, ExperimentConfig, parse_config
from .experiments import describe
from .gaudin import DegeneratePointsError
from .harness import dumps_report, run

EXIT_USAGE = 2


def _rationals(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _mu(text: str) -> dict[str, str]:
    out = {}
    for part in _rationals(text):
        if "=" not in part:
            raise ConfigError("mu", f"expected label=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _weights(items: list[str]) -> list[list[int]]:
    try:
        return [[int(x) for x in it.split(",")] for it in items]
    except ValueError:
        raise ConfigError("weights", f"expected comma-separated integers, got {items!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gaudinlab",
        description="Exact and numeric experiments on Gaudin and argument-shift algebras for sl_r.",
        epilog=f"Representation matrices are cached under ${CACHE_ENV} (default ~/.cache/gaudinlab).",
    )
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in EXPERIMENTS:
        sp = sub.add_parser(name, help=describe(name).splitlines()[0].split(": ", 1)[1])
        sp.add_argument("--config", type=Path, help="JSON config file; flags override its fields")
        sp.add_argument("--out", type=Path, help="directory for the JSON/CSV report")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--tol", type=float, help="simplicity gap tolerance (spectrum experiments)")
        sp.add_argument("--depth", type=int, help="truncation depth of the dual Verma module")
        sp.add_argument("--jobs", type=int, help="worker processes for scans")
        sp.add_argument("--rank", type=int, help="Lie rank: 1 for sl_2, 2 for sl_3")
        sp.add_argument("--weights", nargs="+", metavar="W", help="highest weights, e.g. '1 1' or '1,1'")
        sp.add_argument("--z", type=_rationals, help="marked points, e.g. '0,1,2' or '0,1/3'")
        sp.add_argument("--mu", type=_mu, help="mu values, e.g. 'h=1' or 'h1=1,h2=2'")
        sp.add_argument("--grid", type=_rationals, help="scan grid, e.g. '10,100,1000'")
        sp.add_argument("--family", choices=["quadratic", "gt", "one-point"])
        sp.add_argument("--subspace", choices=["full", "singular"])
        sp.add_argument("--no-casimirs", action="store_true", help="omit per-slot Casimirs")
        sp.add_argument("--print", dest="print_report", action="store_true", help="print the JSON report")
    d = sub.add_parser("describe", help="explain an experiment")
    d.add_argument("experiment", choices=EXPERIMENTS)
    gc = sub.add_parser("cache-gc", help="list or delete cached matrices")
    gc.add_argument("--dir", type=Path, help=f"cache directory (default ${CACHE_ENV})")
    gc.add_argument("--prefix", default="", help="only entries whose key starts with this")
    gc.add_argument("--delete", action="store_true")
    return p


def config_from_args(args) -> ExperimentConfig:
    doc: dict = {}
    if args.config is not None:
        if not args.config.exists():
            raise ConfigError("--config", f"no such file {args.config}")
        try:
            doc = json.loads(args.config.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError("--config", f"invalid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("--config", "config must be a JSON object")
    doc = dict(doc)
    doc["experiment"] = args.command
    if args.rank is not None:
        doc["algebra"] = {"family": "sl", "rank": args.rank}
    if args.weights is not None:
        doc["weights"] = _weights(args.weights)
    if args.z is not None:
        doc["z"] = args.z
    if args.mu is not None:
        doc["mu"] = args.mu
    if args.grid is not None:
        doc["grid"] = args.grid
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.depth is not None:
        doc["depth"] = args.depth
    if args.jobs is not None:
        doc["jobs"] = args.jobs
    if args.family is not None:
        doc["family"] = args.family
    if args.subspace is not None:
        doc["subspace"] = args.subspace
    if args.no_casimirs:
        doc["casimirs"] = False
    if args.tol is not None:
        doc["tolerance"] = {**doc.get("tolerance", {}), "gap": args.tol}
    return parse_config(doc)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "describe":
        sys.stdout.write(describe(args.experiment))
        return 0
    if args.command == "cache-gc":
        d = args.dir if args.dir is not None else default_cache_dir()
        try:
            info = cache_gc(d, args.prefix, args.delete)
        except FileNotFoundError as exc:
            print(f"gaudinlab: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        sys.stdout.write(dumps_report(info))
        return 0
    try:
        cfg = config_from_args(args)
        rec = run(cfg, args.out)
    except (ConfigError, DegeneratePointsError) as exc:
        print(f"gaudinlab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.print_report or args.out is None:
        sys.stdout.write(dumps_report(rec.report))
    status = "ok" if rec.exit_code == 0 else "VIOLATED"
    checks = ", ".join(f"{k}={'pass' if v else 'fail'}" for k, v in {**rec.summary["exact_checks"], **rec.summary["numeric_checks"]}.items())
    print(f"{cfg.experiment}: {status} ({checks})", file=sys.stderr)
    for k in ("json", "csv"):
        if k in rec.paths:
            print(f"  {k}: {rec.paths[k]}", file=sys.stderr)
    return rec.exit_code


if __name__ == "__main__":
    sys.exit(main())
