"""Experiment configuration: parsing, validation and canonical hashing."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Any

from .linalg import format_fraction

EXPERIMENTS = (
    "commutativity",
    "mf-classical",
    "one-point",
    "spectrum",
    "scaling-limit",
    "gt-limit",
    "verma-limit",
    "translation-check",
)

#: seed used when neither the config nor the command line sets one
DEFAULT_SEED = 1729


class ConfigError(ValueError):
    """Invalid configuration; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _rational(value: Any, path: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ConfigError(path, f"rationals are given as integers or strings 'p/q', got {value!r}")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ConfigError(path, f"not a rational number: {value!r}") from None


def _int(value: Any, path: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(path, f"must be >= {minimum}")
    return value


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment run.

    ``r`` is the size of the defining matrices (sl_r); the JSON field
    ``algebra.rank`` is the Lie rank r - 1.
    """

    experiment: str
    r: int = 2
    weights: tuple[tuple[int, ...], ...] = ()
    z: tuple[Fraction, ...] | None = None
    mu: tuple[tuple[str, Fraction], ...] | None = None
    seed: int = DEFAULT_SEED
    tolerance: tuple[tuple[str, float], ...] = ()
    depth: int | None = None
    grid: tuple[Fraction, ...] | None = None
    family: str = "quadratic"
    subspace: str | None = None
    casimirs: bool = True
    output: str | None = None
    jobs: int = 1

    def tol(self, key: str, default: float) -> float:
        return dict(self.tolerance).get(key, default)

    @property
    def mu_map(self) -> dict[str, Fraction] | None:
        return None if self.mu is None else dict(self.mu)

    def with_overrides(self, **kw) -> "ExperimentConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        if "tolerance" in kw:
            merged = dict(self.tolerance)
            merged.update(kw["tolerance"])
            kw["tolerance"] = tuple(sorted(merged.items()))
        return validate(replace(self, **kw))

    def canonical(self) -> dict:
        """Canonical JSON-ready form (rationals as strings); ``output`` and ``jobs`` excluded."""
        return {
            "experiment": self.experiment,
            "algebra": {"family": "sl", "rank": self.r - 1},
            "weights": [list(w) for w in self.weights],
            "z": None if self.z is None else [format_fraction(x) for x in self.z],
            "mu": None if self.mu is None else {k: format_fraction(v) for k, v in self.mu},
            "seed": self.seed,
            "tolerance": {k: v for k, v in self.tolerance},
            "depth": self.depth,
            "grid": None if self.grid is None else [format_fraction(x) for x in self.grid],
            "family": self.family,
            "subspace": self.subspace,
            "casimirs": self.casimirs,
        }

    def hash(self) -> str:
        text = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def parse_config(doc: dict) -> ExperimentConfig:
    """Build and validate a config from its JSON document."""
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    known = {
        "experiment", "algebra", "weights", "z", "mu", "seed", "tolerance",
        "depth", "grid", "family", "subspace", "casimirs", "output", "jobs",
    }
    extra = sorted(set(doc) - known)
    if extra:
        raise ConfigError(extra[0], "unknown field")
    if "experiment" not in doc:
        raise ConfigError("experiment", "missing")
    alg = doc.get("algebra", {"family": "sl", "rank": 1})
    if not isinstance(alg, dict):
        raise ConfigError("algebra", "expected an object {family, rank}")
    if alg.get("family", "sl") != "sl":
        raise ConfigError("algebra.family", "only 'sl' is supported")
    if "r" in alg:
        r = _int(alg["r"], "algebra.r", 2)
        if "rank" in alg and _int(alg["rank"], "algebra.rank", 1) != r - 1:
            raise ConfigError("algebra.rank", "disagrees with algebra.r")
    else:
        r = _int(alg.get("rank", 1), "algebra.rank", 1) + 1
    weights = []
    for k, w in enumerate(doc.get("weights", [])):
        w = [w] if isinstance(w, int) and not isinstance(w, bool) else w
        if not isinstance(w, list):
            raise ConfigError(f"weights[{k}]", "expected an integer tuple")
        weights.append(tuple(_int(x, f"weights[{k}]") for x in w))
    z = doc.get("z")
    if z is not None:
        if not isinstance(z, list):
            raise ConfigError("z", "expected a list of rationals")
        z = tuple(_rational(x, f"z[{k}]") for k, x in enumerate(z))
    mu = doc.get("mu")
    if mu is not None:
        if not isinstance(mu, dict):
            raise ConfigError("mu", "expected a map basis-label -> rational")
        mu = tuple(sorted((str(k), _rational(v, f"mu.{k}")) for k, v in mu.items()))
    tol = doc.get("tolerance", {})
    if not isinstance(tol, dict):
        raise ConfigError("tolerance", "expected a map name -> number")
    tolerance = []
    for k, v in tol.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)) or v <= 0:
            raise ConfigError(f"tolerance.{k}", "expected a positive number")
        tolerance.append((str(k), float(v)))
    grid = doc.get("grid")
    if grid is not None:
        if not isinstance(grid, list):
            raise ConfigError("grid", "expected a list of rationals")
        grid = tuple(_rational(x, f"grid[{k}]") for k, x in enumerate(grid))
    depth = doc.get("depth")
    cfg = ExperimentConfig(
        experiment=doc["experiment"],
        r=r,
        weights=tuple(weights),
        z=z,
        mu=mu,
        seed=_int(doc.get("seed", DEFAULT_SEED), "seed"),
        tolerance=tuple(sorted(tolerance)),
        depth=None if depth is None else _int(depth, "depth", 0),
        grid=grid,
        family=doc.get("family", "quadratic"),
        subspace=doc.get("subspace"),
        casimirs=bool(doc.get("casimirs", True)),
        output=doc.get("output"),
        jobs=_int(doc.get("jobs", 1), "jobs", 1),
    )
    return validate(cfg)


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"invalid JSON: {exc}") from None
    return parse_config(doc)


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    from .liealg import build_sl

    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError("experiment", f"unknown experiment {cfg.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    if cfg.r < 2:
        raise ConfigError("algebra.rank", "must be >= 1")
    g = build_sl(cfg.r)
    for k, w in enumerate(cfg.weights):
        if len(w) != cfg.r - 1:
            raise ConfigError(f"weights[{k}]", f"needs {cfg.r - 1} coordinates for sl_{cfg.r}")
        if any(x < 0 for x in w):
            raise ConfigError(f"weights[{k}]", "must be dominant (nonnegative)")
    if cfg.z is not None and len(set(cfg.z)) != len(cfg.z):
        raise ConfigError("z", "points must be pairwise distinct")
    if cfg.mu is not None:
        for k, _ in cfg.mu:
            if k not in g.labels:
                raise ConfigError(f"mu.{k}", f"unknown basis label; sl_{cfg.r} has {', '.join(g.labels)}")
    if cfg.family not in ("quadratic", "gt", "one-point"):
        raise ConfigError("family", "expected quadratic, gt or one-point")
    if cfg.subspace not in (None, "full", "singular"):
        raise ConfigError("subspace", "expected 'full' or 'singular'")
    if cfg.grid is not None:
        if any(x <= 0 for x in cfg.grid):
            raise ConfigError("grid", "grid points must be positive")
        if len(set(cfg.grid)) != len(cfg.grid):
            raise ConfigError("grid", "grid points must be distinct")
    if cfg.z is not None and cfg.weights and cfg.experiment in ("spectrum", "scaling-limit", "verma-limit"):
        if cfg.family == "quadratic" and len(cfg.z) != len(cfg.weights):
            raise ConfigError("z", f"needs one point per weight ({len(cfg.weights)})")
    return cfg
