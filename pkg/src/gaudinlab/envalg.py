"""U(g) and U(g)^{(x)n} in PBW normal form.

Monomials are nondecreasing tuples of basis indices (with respect to the
algebra's order key).  Products are computed by a memoized right
multiplication by single letters, rewriting x_b x_a -> x_a x_b + [x_b, x_a]
for b > a.  A separate, unmemoized rewriting engine with pluggable strategy
is kept for confluence checks.
"""

from __future__ import annotations

import itertools
import random
import threading
from collections.abc import Mapping, Sequence
from fractions import Fraction
from typing import Callable

from .liealg import ArityError, LieAlgebraData, build_gl
from .linalg import as_fraction, format_fraction
from .symalg import Polynomial

Monomial = tuple[int, ...]


class UndefinedSymbolError(ValueError):
    pass


def _acc(out: dict, key, val):
    v = out.get(key, 0) + val
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class UAlgebra:
    """Enveloping algebra of ``g`` with a PBW order.

    ``order`` is a permutation of basis indices listing them from smallest to
    largest; the default is the global basis order.
    """

    _defaults: dict[int, "UAlgebra"] = {}

    def __init__(self, g: LieAlgebraData, order: Sequence[int] | None = None):
        self.g = g
        order = list(range(g.dim)) if order is None else list(order)
        if sorted(order) != list(range(g.dim)):
            raise ValueError("order must be a permutation of the basis indices")
        self.order = tuple(order)
        self.key = [0] * g.dim
        for pos, a in enumerate(order):
            self.key[a] = pos
        self._letter_memo: dict[tuple[Monomial, int], dict[Monomial, Fraction]] = {}
        self._sym_memo: dict[tuple[int, ...], dict[Monomial, Fraction]] = {}
        self._lock = threading.Lock()

    @classmethod
    def of(cls, g: LieAlgebraData) -> "UAlgebra":
        """Shared default-order instance for ``g``."""
        u = cls._defaults.get(id(g))
        if u is None or u.g is not g:
            u = cls._defaults[id(g)] = cls(g)
        return u

    def sort_key(self, a: int) -> int:
        return self.key[a]

    # -- core product -------------------------------------------------------------
    def mul_letter(self, m: Monomial, a: int) -> dict[Monomial, Fraction]:
        """Normal form of (PBW monomial m) * x_a."""
        if not m or self.key[m[-1]] <= self.key[a]:
            return {m + (a,): Fraction(1)}
        hit = self._letter_memo.get((m, a))
        if hit is not None:
            return hit
        b = m[-1]
        prefix = m[:-1]
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.mul_letter(prefix, a).items():
            for m2, c2 in self.mul_letter(m1, b).items():
                _acc(out, m2, c1 * c2)
        for k, ck in self.g.bracket(b, a).items():
            for m1, c1 in self.mul_letter(prefix, k).items():
                _acc(out, m1, ck * c1)
        # identical values may be inserted concurrently; last write wins
        self._letter_memo[(m, a)] = out
        return out

    def mul_monomials(self, m1: Monomial, m2: Monomial) -> dict[Monomial, Fraction]:
        cur = {m1: Fraction(1)}
        for a in m2:
            nxt: dict[Monomial, Fraction] = {}
            for m, c in cur.items():
                for mm, cc in self.mul_letter(m, a).items():
                    _acc(nxt, mm, c * cc)
            cur = nxt
        return cur

    def normal_form_word(self, word: Sequence[int], coeff=1) -> dict[Monomial, Fraction]:
        out = self.mul_monomials((), tuple(word))
        c = as_fraction(coeff)
        return {m: c * v for m, v in out.items()} if c != 1 else out

    # -- element constructors ---------------------------------------------------------
    def element(self, terms: Mapping[Monomial, Fraction] | None = None) -> "NCElement":
        return NCElement(self, terms or {})

    def one(self) -> "NCElement":
        return NCElement(self, {(): Fraction(1)})

    def zero(self) -> "NCElement":
        return NCElement(self, {})

    def gen(self, a: int | str) -> "NCElement":
        if isinstance(a, str):
            a = self.g.index(a)
        return NCElement(self, {(a,): Fraction(1)})

    def linear(self, vec: Sequence[Fraction]) -> "NCElement":
        return NCElement(self, {(a,): Fraction(c) for a, c in enumerate(vec) if c})

    def word(self, word: Sequence[int | str], coeff=1) -> "NCElement":
        idx = [self.g.index(a) if isinstance(a, str) else a for a in word]
        return NCElement(self, self.normal_form_word(idx, coeff))

    # -- symmetrization ---------------------------------------------------------------
    def symmetrize_monomial(self, letters: tuple[int, ...]) -> dict[Monomial, Fraction]:
        """Average of all orderings of a multiset of letters, normal ordered."""
        key = tuple(sorted(letters))
        hit = self._sym_memo.get(key)
        if hit is not None:
            return hit
        perms = set(itertools.permutations(key))
        w = Fraction(1, len(perms))
        out: dict[Monomial, Fraction] = {}
        for p in perms:
            for m, c in self.mul_monomials((), p).items():
                _acc(out, m, w * c)
        with self._lock:
            self._sym_memo.setdefault(key, out)
        return out


class NCElement:
    """Element of U(g): map from PBW monomials to nonzero rationals."""

    __slots__ = ("U", "terms")

    def __init__(self, U: UAlgebra, terms: Mapping[Monomial, Fraction]):
        self.U = U
        self.terms: dict[Monomial, Fraction] = {tuple(k): Fraction(v) for k, v in terms.items() if v}

    def _check(self, other: "NCElement"):
        if not isinstance(other, NCElement) or other.U is not self.U:
            raise ArityError("elements live in different enveloping algebras")

    def _lift(self, other) -> "NCElement":
        if isinstance(other, NCElement):
            self._check(other)
            return other
        return NCElement(self.U, {(): as_fraction(other)})

    def __eq__(self, other):
        if isinstance(other, NCElement):
            return self.U is other.U and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other) -> "NCElement":
        other = self._lift(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return NCElement(self.U, out)

    __radd__ = __add__

    def __neg__(self):
        return NCElement(self.U, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other) -> "NCElement":
        if not isinstance(other, NCElement):
            c = as_fraction(other)
            return NCElement(self.U, {k: c * v for k, v in self.terms.items()})
        return multiply(self, other)

    def __rmul__(self, other):
        c = as_fraction(other)
        return NCElement(self.U, {k: c * v for k, v in self.terms.items()})

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def max_coefficient(self) -> Fraction:
        return max((abs(v) for v in self.terms.values()), default=Fraction(0))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        labels = self.U.g.labels
        items = sorted(self.terms.items(), key=lambda kv: (-len(kv[0]), [self.U.key[a] for a in kv[0]]))
        parts = []
        for m, c in items:
            s = format_fraction(c)
            if m:
                s += "*" + "·".join(labels[a] for a in m)
            parts.append(s)
        return " + ".join(parts)

    @classmethod
    def from_text(cls, U: UAlgebra, text: str) -> "NCElement":
        text = text.strip()
        if text == "0":
            return U.zero()
        out = U.zero()
        for term in text.split(" + "):
            coeff, _, word = term.partition("*")
            letters = [U.g.index(x) for x in word.split("·")] if word else []
            out = out + U.word(letters, Fraction(coeff))
        return out

    def __repr__(self):
        return f"NCElement({self.to_text()})"


def multiply(a: NCElement, b: NCElement) -> NCElement:
    a._check(b)
    U = a.U
    out: dict[Monomial, Fraction] = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            for m, c in U.mul_monomials(m1, m2).items():
                _acc(out, m, c1 * c2 * c)
    return NCElement(U, out)


def commutator(a, b):
    """ab - ba for NCElement or NCTensorElement operands."""
    return a * b - b * a


def pbw_normal_form(U: UAlgebra, word: Sequence[int | str], coeff=1) -> NCElement:
    return U.word(word, coeff)


Strategy = Callable[[list[int]], int]


def rewrite_normal_form(
    U: UAlgebra, word: Sequence[int], coeff=1, choose: str | Strategy = "leftmost", seed: int = 0
) -> NCElement:
    """Normal form by naive adjacent-transposition rewriting.

    ``choose`` selects which inversion to rewrite among the positions i with
    key(w[i]) > key(w[i+1]): "leftmost", "rightmost", "random", or a
    callable receiving the candidate positions.  Independent of the memoized
    product engine.
    """
    rng = random.Random(seed)
    if choose == "leftmost":
        pick = lambda cand: cand[0]
    elif choose == "rightmost":
        pick = lambda cand: cand[-1]
    elif choose == "random":
        pick = lambda cand: rng.choice(cand)
    else:
        pick = choose
    key = U.key
    todo: dict[tuple[int, ...], Fraction] = {tuple(word): as_fraction(coeff)}
    done: dict[Monomial, Fraction] = {}
    while todo:
        w, c = todo.popitem()
        if not c:
            continue
        cand = [i for i in range(len(w) - 1) if key[w[i]] > key[w[i + 1]]]
        if not cand:
            _acc(done, w, c)
            continue
        i = pick(cand)
        b, a = w[i], w[i + 1]
        swapped = w[:i] + (a, b) + w[i + 2 :]
        _acc(todo, swapped, c)
        for k, ck in U.g.bracket(b, a).items():
            _acc(todo, w[:i] + (k,) + w[i + 2 :], c * ck)
    return NCElement(U, done)


def symmetrize(p: Polynomial, U: UAlgebra | None = None) -> NCElement:
    """Symmetrization S(g) -> U(g): each monomial becomes the average of its orderings."""
    U = U or UAlgebra.of(p.g)
    if U.g is not p.g:
        raise ArityError("polynomial and enveloping algebra use different Lie algebras")
    out: dict[Monomial, Fraction] = {}
    for exp, c in p.terms.items():
        letters = tuple(a for a, e in enumerate(exp) for _ in range(e))
        for m, v in U.symmetrize_monomial(letters).items():
            _acc(out, m, c * v)
    return NCElement(U, out)


def principal_symbol(u: NCElement) -> Polynomial:
    """Top-degree part of u, read as commutative monomials."""
    if u.is_zero():
        raise UndefinedSymbolError("the principal symbol of 0 is undefined")
    g = u.U.g
    top = u.degree()
    out: dict[tuple[int, ...], Fraction] = {}
    for m, c in u.terms.items():
        if len(m) == top:
            e = [0] * g.dim
            for a in m:
                e[a] += 1
            out[tuple(e)] = out.get(tuple(e), 0) + c
    return Polynomial(g, out)


# -- tensor powers ----------------------------------------------------------------------

TensorMonomial = tuple[Monomial, ...]


class NCTensorElement:
    """Element of U(g)^{(x)n}: map from n-tuples of PBW monomials to rationals."""

    __slots__ = ("U", "n", "terms")

    def __init__(self, U: UAlgebra, n: int, terms: Mapping[TensorMonomial, Fraction] | None = None):
        self.U = U
        self.n = n
        self.terms: dict[TensorMonomial, Fraction] = {}
        for k, v in (terms or {}).items():
            if v:
                if len(k) != n:
                    raise ArityError(f"tensor monomial of arity {len(k)} in arity-{n} element")
                self.terms[tuple(k)] = Fraction(v)

    @classmethod
    def scalar(cls, U, n, c=1) -> "NCTensorElement":
        return cls(U, n, {((),) * n: as_fraction(c)})

    def _check(self, other):
        if not isinstance(other, NCTensorElement) or other.U is not self.U or other.n != self.n:
            raise ArityError("tensor elements with mismatched algebra or arity")

    def _lift(self, other):
        if isinstance(other, NCTensorElement):
            self._check(other)
            return other
        return NCTensorElement.scalar(self.U, self.n, other)

    def __eq__(self, other):
        if isinstance(other, NCTensorElement):
            return self.U is other.U and self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.terms.items()))))

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return NCTensorElement(self.U, self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return NCTensorElement(self.U, self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, NCTensorElement):
            c = as_fraction(other)
            return NCTensorElement(self.U, self.n, {k: c * v for k, v in self.terms.items()})
        self._check(other)
        U = self.U
        out: dict[TensorMonomial, Fraction] = {}
        for t1, c1 in self.terms.items():
            for t2, c2 in other.terms.items():
                slots = [U.mul_monomials(a, b) for a, b in zip(t1, t2)]
                for combo in itertools.product(*(s.items() for s in slots)):
                    c = c1 * c2
                    for _, v in combo:
                        c *= v
                    _acc(out, tuple(m for m, _ in combo), c)
        return NCTensorElement(U, self.n, out)

    def __rmul__(self, other):
        c = as_fraction(other)
        return NCTensorElement(self.U, self.n, {k: c * v for k, v in self.terms.items()})

    def degree(self) -> int:
        return max((sum(len(m) for m in t) for t in self.terms), default=-1)

    def max_coefficient(self) -> Fraction:
        return max((abs(v) for v in self.terms.values()), default=Fraction(0))

    def slot(self, i: int) -> NCElement:
        """Component living purely in slot i (others trivial); i is 1-based."""
        out = {}
        for t, c in self.terms.items():
            if all(not m for k, m in enumerate(t) if k != i - 1):
                out[t[i - 1]] = c
        return NCElement(self.U, out)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        labels = self.U.g.labels
        parts = []
        for t, c in sorted(self.terms.items(), key=lambda kv: (-sum(map(len, kv[0])), kv[0])):
            slots = ["·".join(labels[a] for a in m) if m else "1" for m in t]
            parts.append(format_fraction(c) + "*" + "⊗".join(slots))
        return " + ".join(parts)

    def __repr__(self):
        return f"NCTensorElement(n={self.n}, {self.to_text()})"


def embed_factor(u: NCElement, i: int, n: int) -> NCTensorElement:
    """u^{(i)} = 1 (x) ... (x) u (x) ... (x) 1, with 1 <= i <= n."""
    if not 1 <= i <= n:
        raise ArityError(f"slot {i} out of range 1..{n}")
    out = {}
    for m, c in u.terms.items():
        t = [()] * n
        t[i - 1] = m
        out[tuple(t)] = c
    return NCTensorElement(u.U, n, out)


def tensor_product(parts: Sequence[NCElement]) -> NCTensorElement:
    """u_1 (x) ... (x) u_n."""
    U = parts[0].U
    n = len(parts)
    out: dict[TensorMonomial, Fraction] = {}
    for combo in itertools.product(*(p.terms.items() for p in parts)):
        c = Fraction(1)
        for _, v in combo:
            c *= v
        _acc(out, tuple(m for m, _ in combo), c)
    return NCTensorElement(U, n, out)


def diagonal(u: NCElement, n: int) -> NCTensorElement:
    """Image of a Lie-algebra element (degree <= 1) under x -> sum_i x^{(i)}."""
    if u.degree() > 1:
        raise ValueError("diagonal embedding is implemented for linear elements only")
    out = NCTensorElement(u.U, n)
    for m, c in u.terms.items():
        if not m:
            out = out + NCTensorElement.scalar(u.U, n, c)
        else:
            out = out + sum((embed_factor(NCElement(u.U, {m: c}), i, n) for i in range(1, n + 1)), NCTensorElement(u.U, n))
    return out


# -- Gelfand-Tsetlin --------------------------------------------------------------------

def gelfand_tsetlin_generators(r: int) -> list[NCElement]:
    """Gelfand invariants G_{k,m} = sum_{i_1..i_m <= k} E_{i1 i2} ... E_{im i1}.

    Built in U(gl_r) (see ``build_gl``), ordered by k then m, 1 <= m <= k <= r.
    """
    g = build_gl(r)
    U = UAlgebra.of(g)

    def E(i, j) -> NCElement:
        m = tuple(tuple(Fraction(int(a == i and b == j)) for b in range(r)) for a in range(r))
        return U.linear(_dense(g, g.decompose(m)))

    units = {(i, j): E(i, j) for i in range(r) for j in range(r)}
    out = []
    for k in range(1, r + 1):
        # powers of the k x k block of E, entrywise in U(gl_r)
        block = [[units[(i, j)] for j in range(k)] for i in range(k)]
        power = block
        for m in range(1, k + 1):
            out.append(sum((power[i][i] for i in range(k)), U.zero()))
            if m < k:
                power = [[sum((power[i][l] * block[l][j] for l in range(k)), U.zero()) for j in range(k)] for i in range(k)]
    return out


def _dense(g, sparse):
    v = [Fraction(0)] * g.dim
    for k, c in sparse.items():
        v[k] = c
    return v


def gl_matrix_unit(r: int, i: int, j: int) -> NCElement:
    """E_ij (1-based) in U(gl_r)."""
    g = build_gl(r)
    m = tuple(tuple(Fraction(int(a == i - 1 and b == j - 1)) for b in range(r)) for a in range(r))
    return UAlgebra.of(g).linear(_dense(g, g.decompose(m)))


__all__ = [
    "NCElement",
    "NCTensorElement",
    "UAlgebra",
    "UndefinedSymbolError",
    "commutator",
    "diagonal",
    "embed_factor",
    "gelfand_tsetlin_generators",
    "gl_matrix_unit",
    "multiply",
    "pbw_normal_form",
    "principal_symbol",
    "rewrite_normal_form",
    "symmetrize",
    "tensor_product",
]
