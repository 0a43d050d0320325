"""On-disk cache of exact representation matrices.

File format (JSON text, version 1)::

    {"format_version": 1, "r": 3, "lambda": [1, 1], "dim": 8,
     "basis_hash": "...", "key": "...", "central": "3",
     "weights": [[1, 1], ...],
     "matrices": {"e12": [[row, col, "p/q"], ...], ...}}

Entries are listed row-major.  Writes go to a temporary file in the target
directory followed by an atomic rename, so concurrent writers of the same key
are safe.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .liealg import LieAlgebraData, build_sl
from .linalg import QMatrix, format_fraction
from .repthy import Representation, build_irrep

FORMAT_VERSION = 1
CACHE_ENV = "GAUDINLAB_CACHE"


def default_cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, Path.home() / ".cache" / "gaudinlab"))


def basis_hash(g: LieAlgebraData) -> str:
    return hashlib.sha256("|".join(g.labels).encode()).hexdigest()[:12]


def cache_key(g: LieAlgebraData, lam, extra: str = "") -> str:
    lam_s = "-".join(str(x) for x in lam)
    key = f"irrep-sl{g.r}-{lam_s}-{basis_hash(g)}"
    return f"{key}-{extra}" if extra else key


def _weight_json(w):
    return [x if isinstance(x, int) else format_fraction(x) for x in w]


def _weight_parse(w):
    return tuple(int(x) if isinstance(x, int) else Fraction(x) for x in w)


def dumps_representation(rep: Representation, key: str, extra: dict | None = None) -> str:
    g = rep.g
    doc = {
        "format_version": FORMAT_VERSION,
        "r": g.r,
        "lambda": list(rep.highest_weight) if not isinstance(rep.highest_weight, str) else rep.highest_weight,
        "dim": rep.dim,
        "basis_hash": basis_hash(g),
        "key": key,
        "label": rep.label,
        "central": format_fraction(rep.central),
        "weights": [_weight_json(w) for w in rep.weights],
        "matrices": {
            g.labels[a]: [[i, j, format_fraction(v)] for i, j, v in m.triples()] for a, m in enumerate(rep.matrices)
        },
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def loads_representation(text: str) -> Representation:
    doc = json.loads(text)
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported cache format {doc.get('format_version')!r}")
    g = build_sl(doc["r"])
    if doc["basis_hash"] != basis_hash(g):
        raise ValueError("cache file was written with a different basis order")
    n = doc["dim"]
    mats = tuple(
        QMatrix.from_triples((n, n), ((i, j, Fraction(v)) for i, j, v in doc["matrices"][lab])) for lab in g.labels
    )
    lam = doc["lambda"]
    hw = tuple(lam) if isinstance(lam, list) else lam
    return Representation(
        g, n, mats, tuple(_weight_parse(w) for w in doc["weights"]), hw, doc["label"], Fraction(doc["central"])
    )


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cached_irrep(g: LieAlgebraData, lam, cache_dir: str | Path | None = None) -> Representation:
    """build_irrep backed by the on-disk cache."""
    g = g.sl_part()
    lam = (lam,) if isinstance(lam, int) else tuple(lam)
    d = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    key = cache_key(g, lam)
    path = d / f"{key}.json"
    if path.exists():
        return loads_representation(path.read_text(encoding="utf-8"))
    rep = build_irrep(g, lam)
    atomic_write(path, dumps_representation(rep, key))
    return rep


def cache_gc(cache_dir: str | Path, prefix: str = "", delete: bool = False) -> dict:
    """List (and optionally delete) cache entries whose key starts with ``prefix``."""
    d = Path(cache_dir)
    if not d.is_dir():
        raise FileNotFoundError(f"cache directory {d} does not exist")
    entries = sorted(p for p in d.glob("*.json") if p.stem.startswith(prefix))
    total = sum(p.stat().st_size for p in entries)
    if delete:
        for p in entries:
            p.unlink()
    return {"entries": len(entries), "bytes": total, "deleted": bool(delete), "keys": [p.stem for p in entries]}
