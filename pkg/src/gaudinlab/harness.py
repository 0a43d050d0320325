"""Running experiments and persisting their reports."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .cache import atomic_write
from .config import ExperimentConfig
from .experiments import REGISTRY, Outcome

SCHEMA_VERSION = 1


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if "." not in s and "e" not in s:
        s += ".0"
    return s


def _escape(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def dumps_report(obj, indent: int = 2) -> str:
    """JSON with sorted keys and every float printed to 17 significant digits.

    Non-finite floats become null.
    """
    out = io.StringIO()

    def emit(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if o is None or o is True or o is False:
            out.write({None: "null", True: "true", False: "false"}[o])
        elif isinstance(o, int):
            out.write(str(o))
        elif isinstance(o, float):
            out.write(_fmt_float(o))
        elif isinstance(o, str):
            out.write(_escape(o))
        elif isinstance(o, dict):
            if not o:
                out.write("{}")
                return
            out.write("{\n")
            items = sorted(o.items(), key=lambda kv: str(kv[0]))
            for k, (key, val) in enumerate(items):
                out.write(pad + _escape(str(key)) + ": ")
                emit(val, level + 1)
                out.write(",\n" if k < len(items) - 1 else "\n")
            out.write(end + "}")
        elif isinstance(o, (list, tuple)):
            if not o:
                out.write("[]")
                return
            if all(not isinstance(v, (dict, list, tuple)) for v in o):
                out.write("[")
                for k, v in enumerate(o):
                    if k:
                        out.write(", ")
                    emit(v, level + 1)
                out.write("]")
                return
            out.write("[\n")
            for k, v in enumerate(o):
                out.write(pad)
                emit(v, level + 1)
                out.write(",\n" if k < len(o) - 1 else "\n")
            out.write(end + "]")
        elif hasattr(o, "item"):  # numpy scalar
            emit(o.item(), level)
        else:
            out.write(_escape(str(o)))

    emit(obj, 0)
    out.write("\n")
    return out.getvalue()


def _csv_cell(v):
    if isinstance(v, float):
        return _fmt_float(v) if math.isfinite(v) else ""
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return v


def dumps_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


@dataclass
class RunRecord:
    experiment: str
    config_hash: str
    version: str
    status: str
    exit_code: int
    started: float
    finished: float
    summary: dict = field(default_factory=dict)
    paths: dict[str, str] = field(default_factory=dict)
    report: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("report")
        return d


def build_report(cfg: ExperimentConfig, outcome: Outcome) -> dict:
    status = "ok" if outcome.ok else "violated"
    return {
        "schema_version": SCHEMA_VERSION,
        "library_version": __version__,
        "experiment": cfg.experiment,
        "config": cfg.canonical(),
        "config_hash": cfg.hash(),
        "status": status,
        "exact_checks": outcome.exact_checks,
        "numeric_checks": outcome.numeric_checks,
        "witnesses": outcome.witnesses,
        "result": outcome.result,
    }


def run(cfg: ExperimentConfig, out_dir: str | Path | None = None) -> RunRecord:
    """Dispatch to the named experiment and (optionally) write report.json, report.csv and run.json.

    The report carries no timestamps, so it is byte-identical for identical
    configs; timing lives in run.json.
    """
    fn, _ = REGISTRY[cfg.experiment]
    started = time.time()
    outcome = fn(cfg)
    finished = time.time()
    report = build_report(cfg, outcome)
    code = 0 if outcome.ok else 1
    rec = RunRecord(
        cfg.experiment,
        cfg.hash(),
        __version__,
        report["status"],
        code,
        started,
        finished,
        {"exact_checks": outcome.exact_checks, "numeric_checks": outcome.numeric_checks},
        report=report,
    )
    out = out_dir if out_dir is not None else cfg.output
    if out is not None:
        d = Path(out)
        stem = f"{cfg.experiment}-{cfg.hash()}"
        paths = {"json": d / f"{stem}.json", "csv": d / f"{stem}.csv", "record": d / f"{stem}.run.json"}
        atomic_write(paths["json"], dumps_report(report))
        atomic_write(paths["csv"], dumps_csv(outcome.csv_header, outcome.csv_rows))
        rec.paths = {k: str(v) for k, v in paths.items()}
        atomic_write(paths["record"], dumps_report(rec.to_dict()))
    return rec
