"""Truncated contragredient Verma modules M*_chi and mixed singular subspaces.

M*_chi is built as the graded dual of the Verma module M_chi = U(n_-) v_chi,
truncated at root-height depth D.  The action is <x.xi, w> = <xi, tau(x) w>
with tau the transpose anti-automorphism (e_a <-> f_a, h -> h), so the
matrix of x on the dual basis is the transpose of the matrix of tau(x) on
the PBW basis f_{b1} ... f_{bk} v_chi.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .envalg import UAlgebra
from .liealg import LieAlgebraData, LinearFunctional
from .linalg import QMatrix, Subspace, as_fraction, format_fraction, kernel_of
from .repthy import Representation, height_drop, tensor_rep

Monomial = tuple[int, ...]


class DepthError(ValueError):
    pass


@dataclass(eq=False)
class TruncatedDualVerma(Representation):
    chi: tuple[Fraction, ...] = ()
    depth: int = 0
    monomials: tuple[Monomial, ...] = ()
    depths: tuple[int, ...] = ()

    def depth_slice(self, max_depth: int) -> list[int]:
        return [i for i, d in enumerate(self.depths) if d <= max_depth]


_VERMA_ALGEBRAS: dict[int, UAlgebra] = {}


def verma_algebra(g: LieAlgebraData) -> UAlgebra:
    """U(g) ordered f < h < e, so PBW monomials read F * H * E."""
    U = _VERMA_ALGEBRAS.get(id(g))
    if U is None or U.g is not g:
        order = list(g.f_indices) + list(g.cartan_indices) + list(g.e_indices)
        U = _VERMA_ALGEBRAS[id(g)] = UAlgebra(g, order)
    return U


def _chi_values(g: LieAlgebraData, chi) -> tuple[Fraction, ...]:
    if isinstance(chi, LinearFunctional):
        return tuple(chi.values[h] for h in g.cartan_indices)
    vals = (chi,) if isinstance(chi, (int, Fraction, str)) else tuple(chi)
    if len(vals) != g.r - 1:
        raise ValueError(f"chi needs {g.r - 1} Cartan values")
    return tuple(as_fraction(v) for v in vals)


def _f_monomials(g: LieAlgebraData, U: UAlgebra, depth: int) -> list[Monomial]:
    fs = sorted(g.f_indices, key=U.sort_key)
    ht = {a: -g.height_of[a] for a in fs}
    out: list[Monomial] = []

    def rec(start: int, cur: list[int], d: int):
        out.append(tuple(cur))
        for k in range(start, len(fs)):
            a = fs[k]
            if d + ht[a] <= depth:
                cur.append(a)
                rec(k, cur, d + ht[a])
                cur.pop()

    rec(0, [], 0)
    depth_of = lambda m: sum(ht[a] for a in m)
    out.sort(key=lambda m: (depth_of(m), [U.sort_key(a) for a in m]))
    return out


def _tau(g: LieAlgebraData, a: int) -> int:
    n = len(g.positive_roots)
    if a < n:
        return g.f_indices[a]
    if a in g.f_indices:
        return a - g.f_indices[0]
    return a


def dual_verma(g: LieAlgebraData, chi, depth: int) -> TruncatedDualVerma:
    """M*_chi truncated to dual PBW vectors of depth <= ``depth``."""
    if depth < 0:
        raise DepthError("depth must be >= 0")
    g = g.sl_part()
    chiv = _chi_values(g, chi)
    U = verma_algebra(g)
    monos = _f_monomials(g, U, depth)
    index = {m: i for i, m in enumerate(monos)}
    hpos = {h: k for k, h in enumerate(g.cartan_indices)}
    eset = set(g.e_indices)
    dim = len(monos)
    mats = []
    for a in range(g.dim):
        ta = _tau(g, a)
        # A[target, source] for tau(x) on M_chi; dual matrix is its transpose
        rows: dict[int, dict[int, Fraction]] = {}
        for src, m in enumerate(monos):
            for word, c in U.mul_monomials((ta,), m).items():
                if any(x in eset for x in word):
                    continue
                coeff = c
                fpart = []
                for x in word:
                    if x in hpos:
                        coeff *= chiv[hpos[x]]
                    else:
                        fpart.append(x)
                if not coeff:
                    continue
                fm = tuple(fpart)
                tgt = index.get(fm)
                if tgt is None:
                    continue
                # dual matrix entry (row=src, col=tgt) is A[tgt, src]
                rows.setdefault(src, {})
                rows[src][tgt] = rows[src].get(tgt, 0) + coeff
        mats.append(QMatrix((dim, dim), rows))
    return _assemble(g, chiv, depth, monos, mats)


def required_depth(V: Representation) -> int:
    """Total height drop of V: sum over tensor factors."""
    return sum(height_drop(f) for f in V.factors)


def mixed_module(V: Representation, chi, depth: int | None = None) -> tuple[Representation, TruncatedDualVerma]:
    need = required_depth(V)
    if depth is None:
        depth = need
    if depth < need:
        raise DepthError(f"depth {depth} is too small; the singular vectors need depth >= {need}")
    M = dual_verma(V.g, chi, depth)
    return tensor_rep([V, M]), M


def mixed_singular_subspace(V: Representation, chi, depth: int | None = None) -> Subspace:
    """Singular vectors of V (x) M*_chi (truncated at ``depth``) for the diagonal action."""
    W, _ = mixed_module(V, chi, depth)
    g = V.g
    return kernel_of([W.matrices[a] for a in g.simple_root_indices])


def embed_in_deeper(S: Subspace, V: Representation, M: TruncatedDualVerma, M2: TruncatedDualVerma) -> Subspace:
    """Image of a subspace of V (x) M in V (x) M2 for M2 a deeper truncation of M."""
    pos = {m: i for i, m in enumerate(M2.monomials)}
    dm, dm2 = M.dim, M2.dim
    index_map = [(i // dm) * dm2 + pos[M.monomials[i % dm]] for i in range(V.dim * dm)]
    return S.embed(V.dim * dm2, index_map)


def rescale_to_y(M: TruncatedDualVerma, V_dim: int, z: Fraction) -> list[float]:
    """Per-coordinate factors z^(-depth) turning dual-PBW coordinates of
    V (x) M into coordinates along the rescaled generators y = z^ht x."""
    zf = float(z)
    return [zf ** (-M.depths[i % M.dim]) for i in range(V_dim * M.dim)]


def dumps_dual_verma(M: TruncatedDualVerma) -> str:
    from .cache import basis_hash

    g = M.g
    doc = {
        "format_version": 1,
        "r": g.r,
        "lambda": "dual-verma",
        "chi": [format_fraction(c) for c in M.chi],
        "depth": M.depth,
        "dim": M.dim,
        "basis_hash": basis_hash(g),
        "monomials": [list(m) for m in M.monomials],
        "matrices": {
            g.labels[a]: [[i, j, format_fraction(v)] for i, j, v in m.triples()] for a, m in enumerate(M.matrices)
        },
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def verma_cache_key(g: LieAlgebraData, chi, depth: int) -> str:
    from .cache import basis_hash

    chis = "_".join(format_fraction(c).replace("/", "o").replace("-", "m") for c in _chi_values(g, chi))
    return f"dverma-sl{g.r}-chi{chis}-D{depth}-{basis_hash(g)}"


def cached_dual_verma(g: LieAlgebraData, chi, depth: int, cache_dir: str | Path | None = None) -> TruncatedDualVerma:
    """dual_verma backed by the on-disk matrix cache (chi and depth in the key)."""
    from .cache import atomic_write, default_cache_dir

    g = g.sl_part()
    d = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    path = d / f"{verma_cache_key(g, chi, depth)}.json"
    if path.exists():
        return loads_dual_verma(path.read_text(encoding="utf-8"))
    M = dual_verma(g, chi, depth)
    atomic_write(path, dumps_dual_verma(M))
    return M


def loads_dual_verma(text: str) -> TruncatedDualVerma:
    from .cache import basis_hash
    from .liealg import build_sl

    doc = json.loads(text)
    if doc.get("format_version") != 1:
        raise ValueError("unsupported cache format")
    g = build_sl(doc["r"])
    if doc["basis_hash"] != basis_hash(g):
        raise ValueError("cache file was written with a different basis order")
    n = doc["dim"]
    chiv = tuple(Fraction(c) for c in doc["chi"])
    monos = tuple(tuple(m) for m in doc["monomials"])
    mats = tuple(
        QMatrix.from_triples((n, n), ((i, j, Fraction(v)) for i, j, v in doc["matrices"][lab])) for lab in g.labels
    )
    return _assemble(g, chiv, doc["depth"], monos, mats)


def _assemble(g, chiv, depth, monos, mats) -> TruncatedDualVerma:
    weights = []
    for m in monos:
        w = list(chiv)
        for x in m:
            for k, v in enumerate(g.adjoint_weights[x]):
                w[k] += v
        weights.append(tuple(w))
    label = f"M*[{','.join(format_fraction(c) for c in chiv)}]_D{depth}"
    return TruncatedDualVerma(
        g,
        len(monos),
        tuple(mats),
        tuple(weights),
        "dual-verma",
        label,
        Fraction(0),
        (),
        tuple(chiv),
        depth,
        tuple(monos),
        tuple(sum(-g.height_of[a] for a in m) for m in monos),
    )
