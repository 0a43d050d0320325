"""Finite-dimensional sl_r-modules with exact sparse generator matrices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Sequence

from .envalg import NCElement, NCTensorElement
from .liealg import ArityError, LieAlgebraData
from .linalg import QMatrix, Subspace, kernel_of, kron_all, rref

Weight = tuple[int | Fraction, ...]


class InvalidWeightError(ValueError):
    pass


@dataclass(eq=False)
class Representation:
    """A weight-graded g-module.

    ``matrices[a]`` is the matrix of basis element a of sl_r; Cartan matrices
    are diagonal in the stored basis.  ``central`` is the scalar by which the
    gl_r identity acts (number of boxes), used for Gelfand-Tsetlin elements.
    ``factors`` holds the tensor factors for multi-slot modules (a plain
    irrep is its own single factor).
    """

    g: LieAlgebraData
    dim: int
    matrices: tuple[QMatrix, ...]
    weights: tuple[Weight, ...]
    highest_weight: tuple | str
    label: str
    central: Fraction = Fraction(0)
    factors: tuple["Representation", ...] = field(default=())

    def __post_init__(self):
        if not self.factors:
            self.factors = (self,)

    @property
    def n_slots(self) -> int:
        return len(self.factors)

    def matrix(self, a: int | str) -> QMatrix:
        if isinstance(a, str):
            a = self.g.index(a)
        return self.matrices[a]

    def identity(self) -> QMatrix:
        return QMatrix.identity(self.dim)


def weyl_dimension(r: int, lam: Sequence[int]) -> int:
    num = Fraction(1)
    for i in range(r):
        for j in range(i + 1, r):
            s = sum(lam[i:j])
            num *= Fraction(s + (j - i), j - i)
    assert num.denominator == 1
    return int(num)


def _check_weight(g: LieAlgebraData, lam) -> tuple[int, ...]:
    lam = tuple(lam) if not isinstance(lam, int) else (lam,)
    if len(lam) != g.r - 1:
        raise InvalidWeightError(f"highest weight for sl_{g.r} needs {g.r - 1} coordinates, got {lam}")
    for v in lam:
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise InvalidWeightError(f"highest weight must be dominant integral, got {lam}")
    return lam


def _apply_unit(vec: dict, i: int, j: int, coeff: Fraction, out: dict):
    """out += coeff * (sum over slots of E_ij) vec, vectors keyed by index tuples."""
    for key, c in vec.items():
        for s, v in enumerate(key):
            if v == j:
                k2 = key[:s] + (i,) + key[s + 1 :]
                val = out.get(k2, 0) + coeff * c
                if val:
                    out[k2] = val
                else:
                    out.pop(k2, None)


def _apply_element(g: LieAlgebraData, a: int, vec: dict) -> dict:
    out: dict = {}
    m = g.matrices[a]
    for i in range(g.r):
        for j in range(g.r):
            if m[i][j]:
                _apply_unit(vec, i, j, m[i][j], out)
    return out


def build_irrep(g: LieAlgebraData, lam) -> Representation:
    """V_lambda as the cyclic submodule of a tensor power of the defining module.

    The highest-weight vector is the tensor product of a_k copies of
    e_1 ^ ... ^ e_k for every fundamental coordinate a_k of lambda.
    """
    g = g.sl_part()
    lam = _check_weight(g, lam)
    r = g.r
    blocks = []
    for k, a in enumerate(lam, start=1):
        blocks.extend([k] * a)
    hw: dict[tuple[int, ...], Fraction] = {(): Fraction(1)}
    for k in blocks:
        wedge = {}
        for perm in itertools.permutations(range(k)):
            sign = _perm_sign(perm)
            wedge[perm] = Fraction(sign)
        hw = {a + b: ca * cb for a, ca in hw.items() for b, cb in wedge.items()}
    simple_f = [g.f_indices[g.positive_roots.index((i, i + 1))] for i in range(r - 1)]
    cartan_of = lambda key: tuple(key.count(i) - key.count(i + 1) for i in range(r - 1))

    # weight spaces: weight -> (rref basis vectors as dicts, pivots)
    def key_weight(vec):
        return cartan_of(next(iter(vec)))

    spaces: dict[Weight, list[dict]] = {}
    order: list[Weight] = []
    hw_w = key_weight(hw)
    spaces[hw_w] = [hw]
    order.append(hw_w)
    frontier = [hw_w]
    while frontier:
        nxt = []
        incoming: dict[Weight, list[dict]] = {}
        for w in frontier:
            for fa in simple_f:
                for v in spaces[w]:
                    img = _apply_element(g, fa, v)
                    if img:
                        incoming.setdefault(key_weight(img), []).append(img)
        for w in sorted(incoming, key=lambda w: tuple(-x for x in w)):
            basis = _rref_dicts(incoming[w])
            spaces[w] = basis
            order.append(w)
            nxt.append(w)
        frontier = nxt
    # global basis: weight spaces in discovery order (by depth)
    flat: list[tuple[Weight, dict]] = [(w, v) for w in order for v in spaces[w]]
    index_of_space = {}
    pos = 0
    for w in order:
        index_of_space[w] = pos
        pos += len(spaces[w])
    dim = pos
    pivots = {w: [_pivot(v) for v in spaces[w]] for w in order}

    mats = []
    for a in range(g.dim):
        shift = g.adjoint_weights[a]
        rows: dict[int, dict[int, Fraction]] = {}
        for col, (w, v) in enumerate(flat):
            img = _apply_element(g, a, v)
            if not img:
                continue
            tw = tuple(x + y for x, y in zip(w, shift))
            base = index_of_space[tw]
            coords = [img.get(p, Fraction(0)) for p in pivots[tw]]
            check: dict = {}
            for cvec, c in zip(spaces[tw], coords):
                if c:
                    for kk, vv in cvec.items():
                        check[kk] = check.get(kk, 0) + c * vv
            check = {k: v for k, v in check.items() if v}
            if check != img:
                raise ArithmeticError("image escaped the constructed module")
            for t, c in enumerate(coords):
                if c:
                    rows.setdefault(base + t, {})[col] = c
        mats.append(QMatrix((dim, dim), rows))
    weights = tuple(w for w, _ in flat)
    boxes = sum(blocks)
    return Representation(g, dim, tuple(mats), weights, lam, f"V{list(lam)}", Fraction(boxes))


def _perm_sign(p) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def _pivot(v: dict):
    return min(v)


def _rref_dicts(vecs: list[dict]) -> list[dict]:
    keys = sorted(set().union(*vecs))
    rows = [[v.get(k, Fraction(0)) for k in keys] for v in vecs]
    red, piv = rref(rows)
    return [{keys[j]: x for j, x in enumerate(row) if x} for row in red]


def tensor_rep(reps: Sequence[Representation]) -> Representation:
    """Tensor product of modules, with the diagonal action and concatenated slots."""
    reps = list(reps)
    if not reps:
        raise ArityError("need at least one factor")
    g = reps[0].g
    factors: list[Representation] = []
    for rp in reps:
        if rp.g is not g:
            raise ArityError("tensor factors over different Lie algebras")
        factors.extend(rp.factors)
    if len(factors) == 1:
        return factors[0]
    dims = [f.dim for f in factors]
    mats = []
    for a in range(g.dim):
        mats.append(_diagonal_matrix([f.matrices[a] for f in factors]))
    weights = tuple(
        tuple(sum(ws) for ws in zip(*combo)) for combo in itertools.product(*(f.weights for f in factors))
    )
    label = "⊗".join(f.label for f in factors)
    return Representation(
        g, prod(dims), tuple(mats), weights, "composite", label, sum((f.central for f in factors), Fraction(0)), tuple(factors)
    )


def _diagonal_matrix(mats: Sequence[QMatrix]) -> QMatrix:
    ids = [QMatrix.identity(m.shape[0]) for m in mats]
    total = None
    for i, m in enumerate(mats):
        parts = ids[:i] + [m] + ids[i + 1 :]
        term = kron_all(parts)
        total = term if total is None else total + term
    return total


def _letter_matrix(rep: Representation, alg_g: LieAlgebraData, a: int) -> QMatrix:
    if alg_g.central is not None and a == alg_g.central:
        return QMatrix.identity(rep.dim, rep.central)
    if alg_g.central is not None and alg_g.r != rep.g.r:
        raise ArityError("gl/sl rank mismatch")
    if alg_g.central is None and alg_g is not rep.g:
        raise ArityError("element and module use different Lie algebras")
    return rep.matrices[a]


def _monomial_matrix(rep, alg_g, m, memo) -> QMatrix:
    hit = memo.get(m)
    if hit is not None:
        return hit
    if not m:
        out = QMatrix.identity(rep.dim)
    else:
        out = _monomial_matrix(rep, alg_g, m[:-1], memo) @ _letter_matrix(rep, alg_g, m[-1])
    memo[m] = out
    return out


def act(u: NCElement | NCTensorElement, rep: Representation) -> QMatrix:
    """Exact matrix of u on rep.

    An NCElement acts through rep's own generator matrices (for a tensor
    module this is the diagonal action); an NCTensorElement of arity n acts
    slot-wise on an n-factor module.
    """
    alg_g = u.U.g
    if isinstance(u, NCElement):
        memo: dict = {}
        total = QMatrix.zeros(rep.dim)
        for m, c in u.terms.items():
            total = total + _monomial_matrix(rep, alg_g, m, memo).scale(c)
        return total
    if u.n != rep.n_slots:
        raise ArityError(f"element of arity {u.n} cannot act on a {rep.n_slots}-slot module")
    memos = [dict() for _ in rep.factors]
    total = QMatrix.zeros(rep.dim)
    for t, c in u.terms.items():
        parts = [_monomial_matrix(f, alg_g, m, memo) for f, m, memo in zip(rep.factors, t, memos)]
        total = total + kron_all(parts).scale(c)
    return total


def singular_subspace(rep: Representation) -> Subspace:
    """Common kernel of the (diagonal) simple raising operators."""
    g = rep.g
    return kernel_of([rep.matrices[a] for a in g.simple_root_indices])


def weight_components(rep: Representation) -> dict[Weight, Subspace]:
    out: dict[Weight, list[int]] = {}
    for i, w in enumerate(rep.weights):
        out.setdefault(tuple(w), []).append(i)
    comps = {}
    for w, idx in out.items():
        vecs = [[Fraction(int(j == i)) for j in range(rep.dim)] for i in idx]
        comps[w] = Subspace.span(rep.dim, vecs)
    return comps


def height_drop(rep: Representation) -> int:
    """Height (in simple roots) between the highest and lowest weights of rep."""
    g = rep.g
    r = g.r
    # root coordinates: weight w (Dynkin labels) = A c, A the Cartan matrix
    inv = _inverse_cartan(r)
    hts = [sum(sum(inv[i][j] * w[j] for j in range(r - 1)) for i in range(r - 1)) for w in rep.weights]
    drop = max(hts) - min(hts)
    assert Fraction(drop).denominator == 1
    return int(drop)


def _inverse_cartan(r: int):
    n = r - 1
    A = [[Fraction(2 if i == j else -1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]
    aug = [A[i] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, _ = rref(aug)
    return [row[n:] for row in red]


def check_bracket_relations(rep: Representation, rows: Sequence[int] | None = None) -> list[tuple[int, int]]:
    """Basis pairs (a, b) where M([x_a,x_b]) != [M(x_a), M(x_b)] (restricted to ``rows``)."""
    g = rep.g
    bad = []
    for a in range(g.dim):
        for b in range(a + 1, g.dim):
            lhs = QMatrix.zeros(rep.dim)
            for k, c in g.bracket(a, b).items():
                lhs = lhs + rep.matrices[k].scale(c)
            rhs = rep.matrices[a].commutator(rep.matrices[b])
            diff = lhs - rhs
            if rows is not None:
                keep = set(rows)
                diff = QMatrix(diff.shape, {i: r for i, r in diff.rows.items() if i in keep})
            if not diff.is_zero():
                bad.append((a, b))
    return bad


__all__ = [
    "InvalidWeightError",
    "Representation",
    "act",
    "build_irrep",
    "check_bracket_relations",
    "height_drop",
    "singular_subspace",
    "tensor_rep",
    "weight_components",
    "weyl_dimension",
]
