"""S(g) = Q[g^*]: polynomials, Poisson-Lie and frozen-argument brackets,
invariants Phi_k and Mishchenko-Fomenko (argument shift) generators."""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .liealg import ArityError, LieAlgebraData, LinearFunctional, is_regular_semisimple
from .linalg import as_fraction, format_fraction, rank

Exponent = tuple[int, ...]


class Polynomial:
    """Sparse commutative polynomial in the basis coordinates of g.

    Terms map exponent multi-indices (one slot per basis element) to nonzero
    rationals.  Immutable by convention.
    """

    __slots__ = ("g", "terms")

    def __init__(self, g: LieAlgebraData, terms: Mapping[Exponent, Fraction] | None = None):
        self.g = g
        self.terms: dict[Exponent, Fraction] = {}
        if terms:
            for k, v in terms.items():
                if v:
                    self.terms[tuple(k)] = Fraction(v)

    # -- constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, g) -> "Polynomial":
        return cls(g)

    @classmethod
    def constant(cls, g, c) -> "Polynomial":
        return cls(g, {(0,) * g.dim: as_fraction(c)})

    @classmethod
    def coordinate(cls, g, a: int | str) -> "Polynomial":
        if isinstance(a, str):
            a = g.index(a)
        e = [0] * g.dim
        e[a] = 1
        return cls(g, {tuple(e): Fraction(1)})

    @classmethod
    def linear(cls, g, vec: Sequence[Fraction]) -> "Polynomial":
        out = {}
        for a, c in enumerate(vec):
            if c:
                e = [0] * g.dim
                e[a] = 1
                out[tuple(e)] = Fraction(c)
        return cls(g, out)

    @classmethod
    def gens(cls, g) -> list["Polynomial"]:
        return [cls.coordinate(g, a) for a in range(g.dim)]

    # -- basic protocol ---------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if not isinstance(other, Polynomial) or other.g is not self.g:
            raise ArityError("polynomials live in different ambient algebras")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.g, other)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.g is other.g and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.g, other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other) -> "Polynomial":
        other = self._lift(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Polynomial(self.g, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.g, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._lift(other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = as_fraction(other)
            return Polynomial(self.g, {k: c * v for k, v in self.terms.items()})
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return Polynomial(self.g, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        out = Polynomial.constant(self.g, 1)
        for _ in range(n):
            out = out * self
        return out

    # -- structure ----------------------------------------------------------------
    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def homogeneous_part(self, deg: int) -> "Polynomial":
        return Polynomial(self.g, {k: v for k, v in self.terms.items() if sum(k) == deg})

    def is_homogeneous(self) -> bool:
        return len({sum(k) for k in self.terms}) <= 1

    def is_constant(self) -> bool:
        return self.degree() <= 0

    def max_coefficient(self) -> Fraction:
        return max((abs(v) for v in self.terms.values()), default=Fraction(0))

    def diff(self, a: int) -> "Polynomial":
        out = {}
        for k, v in self.terms.items():
            if k[a]:
                kk = list(k)
                kk[a] -= 1
                out[tuple(kk)] = v * k[a]
        return Polynomial(self.g, out)

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for k, v in self.terms.items():
            t = v
            for a, e in enumerate(k):
                if e:
                    t *= Fraction(point[a]) ** e
            total += t
        return total

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Graded lexicographic order in the global basis order (highest first)."""
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))

    # -- text form ----------------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, v in self.sorted_terms():
            factors = []
            for a, e in enumerate(k):
                if e == 1:
                    factors.append(self.g.labels[a])
                elif e > 1:
                    factors.append(f"{self.g.labels[a]}^{e}")
            parts.append("*".join([format_fraction(v)] + factors))
        return " + ".join(parts)

    @classmethod
    def from_text(cls, g: LieAlgebraData, text: str) -> "Polynomial":
        text = text.strip()
        if text == "0":
            return cls(g)
        out: dict[Exponent, Fraction] = {}
        for term in text.split(" + "):
            pieces = term.strip().split("*")
            coeff = Fraction(pieces[0])
            e = [0] * g.dim
            for f in pieces[1:]:
                m = re.fullmatch(r"([A-Za-z0-9]+)(?:\^(\d+))?", f)
                if not m:
                    raise ValueError(f"cannot parse factor {f!r}")
                e[g.index(m.group(1))] += int(m.group(2) or 1)
            out[tuple(e)] = out.get(tuple(e), 0) + coeff
        return cls(g, out)

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()})"


# -- brackets --------------------------------------------------------------------

def _bracket_with(f: Polynomial, g: Polynomial, pairing) -> Polynomial:
    f._check(g)
    alg = f.g
    df = {a: f.diff(a) for a in range(alg.dim)}
    dg = {b: g.diff(b) for b in range(alg.dim)}
    df = {a: p for a, p in df.items() if p}
    dg = {b: p for b, p in dg.items() if p}
    out = Polynomial.zero(alg)
    for a, pa in df.items():
        for b, pb in dg.items():
            c = pairing(a, b)
            if c:
                out = out + pa * pb * c
    return out


def poisson_bracket(f: Polynomial, g: Polynomial) -> Polynomial:
    """Poisson-Lie bracket: Leibniz extension of {x_a, x_b} = [x_a, x_b]."""
    alg = f.g
    return _bracket_with(f, g, lambda a, b: Polynomial.linear(alg, _vec(alg, alg.bracket(a, b))) if alg.bracket(a, b) else 0)


def frozen_bracket(f: Polynomial, g: Polynomial, mu: LinearFunctional) -> Polynomial:
    """Frozen-argument bracket {x_a, x_b}_mu = mu([x_a, x_b])."""
    alg = f.g

    def pair(a, b):
        return sum((mu.values[k] * c for k, c in alg.bracket(a, b).items()), Fraction(0))

    return _bracket_with(f, g, pair)


def _vec(alg, sparse: Mapping[int, Fraction]) -> list[Fraction]:
    v = [Fraction(0)] * alg.dim
    for k, c in sparse.items():
        v[k] = c
    return v


def directional_derivative(f: Polynomial, mu: LinearFunctional, n: int = 1) -> Polynomial:
    """n-fold derivation d_mu with d_mu x_a = mu(x_a)."""
    if n < 0:
        raise ArityError("derivative order must be >= 0")
    out = f
    for _ in range(n):
        acc = Polynomial.zero(f.g)
        for a, v in enumerate(mu.values):
            if v:
                acc = acc + out.diff(a) * v
        out = acc
    return out


# -- invariants -------------------------------------------------------------------

def generic_matrix(g: LieAlgebraData) -> list[list[Polynomial]]:
    """M(xi) = sum_a x_a * matrix(x^a): the trace-form image of xi in g^*."""
    r = g.r
    M = [[Polynomial.zero(g) for _ in range(r)] for _ in range(r)]
    for a in range(g.dim):
        xa = Polynomial.coordinate(g, a)
        for b, c in g.dual_basis(a).items():
            m = g.matrices[b]
            for i in range(r):
                for j in range(r):
                    if m[i][j]:
                        M[i][j] = M[i][j] + xa * (c * m[i][j])
    return M


def invariant_generators(g: LieAlgebraData) -> list[Polynomial]:
    """Phi_1..Phi_{r-1}: Phi_k = -(coefficient of t^(r-k-1)) in det(t - M(xi)).

    Phi_1 is the quadratic Casimir polynomial, Phi_1 = Tr(M^2)/2, and
    deg Phi_k = k + 1.
    """
    r = g.r
    M = generic_matrix(g)
    # power sums p_k = Tr(M^k), then Newton's identities for the char-poly coefficients
    power = [row[:] for row in M]
    p = [None]
    for k in range(1, r + 1):
        p.append(sum((power[i][i] for i in range(r)), Polynomial.zero(g)))
        if k < r:
            power = [[sum((power[i][l] * M[l][j] for l in range(r)), Polynomial.zero(g)) for j in range(r)] for i in range(r)]
    c = [Polynomial.constant(g, 1)]
    for k in range(1, r + 1):
        acc = Polynomial.zero(g)
        for i in range(1, k + 1):
            acc = acc + c[k - i] * p[i]
        c.append(acc * Fraction(-1, k))
    return [-c[k + 1] for k in range(1, r)]


@dataclass(frozen=True, eq=False)
class MFFamily:
    mu: LinearFunctional
    generators: tuple[Polynomial, ...]
    regular: bool
    labels: tuple[tuple[int, int], ...]  # (k, n): generator = d_mu^n Phi_k


def mf_generators(g: LieAlgebraData, mu: LinearFunctional) -> MFFamily:
    """d_mu^n Phi_k for k = 1..r-1, n = 0..deg Phi_k - 1.

    The top derivative (a constant) is omitted.  Zero and repeated
    polynomials are dropped, which only happens for degenerate mu.
    """
    regular = is_regular_semisimple(g, mu)
    if not regular:
        warnings.warn("mu is not regular semisimple; the family may be degenerate", stacklevel=2)
    gens: list[Polynomial] = []
    labels = []
    for k, phi in enumerate(invariant_generators(g), start=1):
        cur = phi
        for n in range(phi.degree()):
            if cur and cur not in gens:
                gens.append(cur)
                labels.append((k, n))
            cur = directional_derivative(cur, mu, 1)
    return MFFamily(mu, tuple(gens), regular, tuple(labels))


def jacobian_rank(polys: Iterable[Polynomial], point: LinearFunctional | Sequence) -> int:
    """Exact rank of the Jacobian matrix at a point of g^*."""
    polys = list(polys)
    if not polys:
        return 0
    pt = point.values if isinstance(point, LinearFunctional) else tuple(as_fraction(v) for v in point)
    d = polys[0].g.dim
    if len(pt) != d:
        raise ArityError(f"point needs {d} coordinates")
    rows = [[p.diff(a).evaluate(pt) for a in range(d)] for p in polys]
    return rank(rows)


def casimir_polynomial(g: LieAlgebraData) -> Polynomial:
    """sum_a x_a x^a as a commutative polynomial (= 2 Phi_1)."""
    out = Polynomial.zero(g)
    for a in range(g.dim):
        for b, c in g.dual_basis(a).items():
            out = out + Polynomial.coordinate(g, a) * Polynomial.coordinate(g, b) * c
    return out


__all__ = [
    "MFFamily",
    "Polynomial",
    "casimir_polynomial",
    "directional_derivative",
    "frozen_bracket",
    "generic_matrix",
    "invariant_generators",
    "jacobian_rank",
    "mf_generators",
    "poisson_bracket",
]
