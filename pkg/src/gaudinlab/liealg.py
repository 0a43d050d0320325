"""The Lie algebra sl_r over Q in its defining matrix model.

Basis order (used by every PBW ordering downstream): positive root vectors
e_ij = E_ij (i < j) sorted by height j - i then lexicographically, then the
Cartan elements h_k = E_kk - E_{k+1,k+1}, then f_ij = E_ji mirroring the e
order.  ``build_gl`` appends the identity matrix ``I`` as a central element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .linalg import QMatrix, as_fraction, rank, rref

#: Killing form = KILLING_SCALE(r) * trace form on sl_r.
def killing_scale(r: int) -> int:
    return 2 * r


class InvalidRankError(ValueError):
    pass


class ArityError(ValueError):
    pass


Matrix = tuple[tuple[Fraction, ...], ...]


def _mat(r: int, entries: Mapping[tuple[int, int], Fraction]) -> Matrix:
    return tuple(tuple(Fraction(entries.get((i, j), 0)) for j in range(r)) for i in range(r))


def _mmul(a: Matrix, b: Matrix) -> Matrix:
    r = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(r) if a[i][k] and b[k][j]), Fraction(0)) for j in range(r))
        for i in range(r)
    )


def _trace(a: Matrix) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


@dataclass(frozen=True, eq=False)
class LieAlgebraData:
    """Structure data for sl_r (or gl_r when ``central`` is set)."""

    r: int
    labels: tuple[str, ...]
    matrices: tuple[Matrix, ...]
    positive_roots: tuple[tuple[int, int], ...]  # (i, j), 0-based, i < j
    cartan_indices: tuple[int, ...]
    central: int | None = None  # index of the identity element for gl_r
    brackets: dict = field(default_factory=dict, repr=False)

    def __reduce__(self):
        # unpickle to the cached instance so identity checks survive worker processes
        return (_build, (self.r, self.central is not None))

    # -- basic data -----------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def rank(self) -> int:
        return self.r - 1

    @property
    def family(self) -> str:
        return "gl" if self.central is not None else "sl"

    def heights(self) -> tuple[int, ...]:
        return tuple(j - i for i, j in self.positive_roots)

    @cached_property
    def e_indices(self) -> tuple[int, ...]:
        return tuple(range(len(self.positive_roots)))

    @cached_property
    def f_indices(self) -> tuple[int, ...]:
        n = len(self.positive_roots)
        return tuple(range(n + self.r - 1, n + self.r - 1 + n))

    @cached_property
    def simple_root_indices(self) -> tuple[int, ...]:
        return tuple(k for k, (i, j) in enumerate(self.positive_roots) if j - i == 1)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown basis label {label!r}; expected one of {self.labels}") from None

    def matrix_unit_index(self, i: int, j: int) -> int:
        """Basis index of E_ij (0-based, i != j)."""
        if i < j:
            return self.positive_roots.index((i, j))
        return self.f_indices[self.positive_roots.index((j, i))]

    def root_of(self, a: int) -> tuple[int, ...] | None:
        """Weight of basis element a under the Cartan (values on h_1..h_{r-1})."""
        return self.adjoint_weights[a]

    @cached_property
    def adjoint_weights(self) -> tuple[tuple[int, ...], ...]:
        out = []
        for a in range(self.dim):
            vals = []
            for h in self.cartan_indices:
                br = self.bracket(h, a)
                if not br:
                    vals.append(0)
                else:
                    (k, c), = br.items()
                    assert k == a
                    vals.append(int(c))
            out.append(tuple(vals))
        return tuple(out)

    @cached_property
    def height_of(self) -> tuple[int, ...]:
        """Signed root height of each basis element (0 on the Cartan/centre)."""
        out = []
        n = len(self.positive_roots)
        for a in range(self.dim):
            if a < n:
                out.append(self.heights()[a])
            elif a in self.f_indices:
                out.append(-self.heights()[a - self.f_indices[0]])
            else:
                out.append(0)
        return tuple(out)

    # -- matrix model ---------------------------------------------------------
    def decompose(self, m: Matrix) -> dict[int, Fraction]:
        """Coordinates of an r x r matrix in the basis (must lie in the algebra)."""
        r = self.r
        out: dict[int, Fraction] = {}
        for i in range(r):
            for j in range(r):
                if i != j and m[i][j]:
                    out[self.matrix_unit_index(i, j)] = Fraction(m[i][j])
        diag = [Fraction(m[i][i]) for i in range(r)]
        tr = sum(diag, Fraction(0))
        if self.central is not None:
            c = tr / r
            if c:
                out[self.central] = c
            diag = [d - c for d in diag]
        elif tr:
            raise ValueError("matrix is not traceless")
        acc = Fraction(0)
        for k, h in enumerate(self.cartan_indices):
            acc += diag[k]
            if acc:
                out[h] = acc
        return out

    def bracket(self, a: int, b: int) -> dict[int, Fraction]:
        """[x_a, x_b] as a sparse coordinate map."""
        return self.brackets[(a, b)]

    def bracket_vec(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if not yb:
                    continue
                for k, c in self.bracket(a, b).items():
                    out[k] += xa * yb * c
        return out

    def matrix_of(self, vec: Sequence[Fraction]) -> Matrix:
        r = self.r
        acc = [[Fraction(0)] * r for _ in range(r)]
        for a, c in enumerate(vec):
            if c:
                m = self.matrices[a]
                for i in range(r):
                    for j in range(r):
                        if m[i][j]:
                            acc[i][j] += c * m[i][j]
        return tuple(tuple(row) for row in acc)

    def basis_vector(self, a: int | str) -> list[Fraction]:
        if isinstance(a, str):
            a = self.index(a)
        v = [Fraction(0)] * self.dim
        v[a] = Fraction(1)
        return v

    # -- forms ----------------------------------------------------------------
    @cached_property
    def trace_form(self) -> tuple[tuple[Fraction, ...], ...]:
        """Gram matrix T(x_a, x_b) = Tr(x_a x_b) in the defining representation."""
        return tuple(
            tuple(_trace(_mmul(self.matrices[a], self.matrices[b])) for b in range(self.dim))
            for a in range(self.dim)
        )

    @cached_property
    def trace_form_inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        n = self.dim
        aug = [list(self.trace_form[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        red, piv = rref(aug)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise ArithmeticError("trace form is singular")
        return tuple(tuple(row[n:]) for row in red)

    def ad_matrix(self, vec: Sequence[Fraction]) -> QMatrix:
        """Matrix of ad(x) in the basis (columns = images of basis elements)."""
        rows: dict[int, dict[int, Fraction]] = {}
        for b in range(self.dim):
            for a, xa in enumerate(vec):
                if not xa:
                    continue
                for k, c in self.bracket(a, b).items():
                    rows.setdefault(k, {})
                    rows[k][b] = rows[k].get(b, 0) + xa * c
        return QMatrix((self.dim, self.dim), rows)

    def dual_basis(self, a: int) -> dict[int, Fraction]:
        """x^a with T(x^a, x_b) = delta_ab."""
        inv = self.trace_form_inverse
        return {b: inv[a][b] for b in range(self.dim) if inv[a][b]}

    def sharp(self, mu: "LinearFunctional") -> list[Fraction]:
        """mu -> mu# in g with T(mu#, x) = mu(x)."""
        self._check_functional(mu)
        inv = self.trace_form_inverse
        out = [Fraction(0)] * self.dim
        for a, v in enumerate(mu.values):
            if v:
                for b in range(self.dim):
                    if inv[a][b]:
                        out[b] += v * inv[a][b]
        return out

    def functional_from_matrix(self, m: Matrix) -> "LinearFunctional":
        """The functional x -> Tr(m x)."""
        return LinearFunctional(tuple(_trace(_mmul(m, self.matrices[a])) for a in range(self.dim)))

    def functional(self, values: Mapping[str, object] | Sequence) -> "LinearFunctional":
        """Build a functional from {label: value} or a full value sequence."""
        if isinstance(values, Mapping):
            vals = [Fraction(0)] * self.dim
            for k, v in values.items():
                vals[self.index(k)] = as_fraction(v)
            return LinearFunctional(tuple(vals))
        if len(values) != self.dim:
            raise ArityError(f"functional needs {self.dim} values, got {len(values)}")
        return LinearFunctional(tuple(as_fraction(v) for v in values))

    def zero_functional(self) -> "LinearFunctional":
        return LinearFunctional((Fraction(0),) * self.dim)

    def cartan_functional(self, hvals: Sequence) -> "LinearFunctional":
        """Functional with the given values on h_1..h_{r-1}, zero on root vectors."""
        vals = [Fraction(0)] * self.dim
        for h, v in zip(self.cartan_indices, hvals):
            vals[h] = as_fraction(v)
        return LinearFunctional(tuple(vals))

    def _check_functional(self, mu: "LinearFunctional"):
        if len(mu.values) != self.dim:
            raise ArityError(f"functional has {len(mu.values)} values, algebra has dim {self.dim}")

    def sl_part(self) -> "LieAlgebraData":
        return build_sl(self.r) if self.central is not None else self


@dataclass(frozen=True)
class LinearFunctional:
    """mu in g^*, stored by its values on the basis."""

    values: tuple[Fraction, ...]

    def __call__(self, vec: Sequence[Fraction]) -> Fraction:
        return sum((v * x for v, x in zip(self.values, vec) if v and x), Fraction(0))

    def scaled(self, c) -> "LinearFunctional":
        c = as_fraction(c)
        return LinearFunctional(tuple(c * v for v in self.values))

    def is_zero(self) -> bool:
        return not any(self.values)


@dataclass(frozen=True)
class TensorElement2:
    """Sum of c * x_a (x) x_b, canonical sorted terms, no zero coefficients."""

    terms: tuple[tuple[tuple[int, int], Fraction], ...]

    @classmethod
    def from_dict(cls, d: Mapping[tuple[int, int], Fraction]) -> "TensorElement2":
        return cls(tuple(sorted((k, Fraction(v)) for k, v in d.items() if v)))

    def as_dict(self) -> dict[tuple[int, int], Fraction]:
        return dict(self.terms)

    def flip(self) -> "TensorElement2":
        return TensorElement2.from_dict({(b, a): c for (a, b), c in self.terms})


_CACHE: dict[tuple[str, int], LieAlgebraData] = {}


def _build(r: int, with_centre: bool) -> LieAlgebraData:
    if not isinstance(r, int) or r < 2:
        raise InvalidRankError(f"sl_r needs integer r >= 2, got {r!r}")
    key = ("gl" if with_centre else "sl", r)
    if key in _CACHE:
        return _CACHE[key]
    roots = sorted(((i, j) for i in range(r) for j in range(i + 1, r)), key=lambda ij: (ij[1] - ij[0], ij))
    short = r == 2
    labels: list[str] = []
    mats: list[Matrix] = []
    for i, j in roots:
        labels.append("e" if short else f"e{i + 1}{j + 1}")
        mats.append(_mat(r, {(i, j): 1}))
    cartan = []
    for k in range(r - 1):
        cartan.append(len(labels))
        labels.append("h" if short else f"h{k + 1}")
        mats.append(_mat(r, {(k, k): 1, (k + 1, k + 1): -1}))
    for i, j in roots:
        labels.append("f" if short else f"f{i + 1}{j + 1}")
        mats.append(_mat(r, {(j, i): 1}))
    central = None
    if with_centre:
        central = len(labels)
        labels.append("I")
        mats.append(_mat(r, {(k, k): 1 for k in range(r)}))
    g = LieAlgebraData(r, tuple(labels), tuple(mats), tuple(roots), tuple(cartan), central)
    d = g.dim
    for a in range(d):
        for b in range(d):
            ab = _mmul(mats[a], mats[b])
            ba = _mmul(mats[b], mats[a])
            comm = tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(ab, ba))
            g.brackets[(a, b)] = g.decompose(comm)
    _CACHE[key] = g
    return g


def build_sl(r: int) -> LieAlgebraData:
    """sl_r with the fixed global basis order."""
    return _build(r, False)


def build_gl(r: int) -> LieAlgebraData:
    """gl_r = sl_r + Q*I; the sl_r basis comes first, I last."""
    return _build(r, True)


def killing_form(g: LieAlgebraData, x: Sequence, y: Sequence) -> Fraction:
    """Tr(ad x ad y) computed from the structure constants."""
    if len(x) != g.dim or len(y) != g.dim:
        raise ArityError(f"expected vectors of length {g.dim}")
    x = [as_fraction(v) for v in x]
    y = [as_fraction(v) for v in y]
    prod = g.ad_matrix(x) @ g.ad_matrix(y)
    return sum(prod.diagonal(), Fraction(0))


def casimir_tensor(g: LieAlgebraData) -> TensorElement2:
    """Split Casimir sum_a x_a (x) x^a over trace-form dual bases."""
    inv = g.trace_form_inverse
    return TensorElement2.from_dict({(a, b): inv[a][b] for a in range(g.dim) for b in range(g.dim)})


def _charpoly(m: Matrix) -> list[Fraction]:
    """Coefficients c_0..c_r of det(t - m) = sum c_k t^(r-k) (Faddeev-LeVerrier)."""
    r = len(m)
    coeffs = [Fraction(1)]
    ident = _mat(r, {(i, i): 1 for i in range(r)})
    mk = ident
    for k in range(1, r + 1):
        am = _mmul(m, mk)
        c = -_trace(am) / k
        coeffs.append(c)
        mk = tuple(tuple(am[i][j] + (c if i == j else 0) for j in range(r)) for i in range(r))
    return coeffs


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    def strip(p):
        while p and not p[0]:
            p = p[1:]
        return p

    a, b = strip(list(a)), strip(list(b))
    while b:
        while len(a) >= len(b) and a:
            q = a[0] / b[0]
            a = strip([x - q * y for x, y in zip(a, b + [Fraction(0)] * (len(a) - len(b)))])
        a, b = b, a
    return a


def is_diagonalizable(m: Matrix) -> bool:
    """Squarefree minimal polynomial test via the characteristic polynomial.

    Only used on regular elements (centraliser of dimension r - 1), where the
    minimal and characteristic polynomials coincide.
    """
    cp = _charpoly(m)
    r = len(m)
    deriv = [cp[k] * (r - k) for k in range(r)]
    return len(_poly_gcd(cp, deriv)) == 1


def centralizer_dimension(g: LieAlgebraData, mu: LinearFunctional) -> int:
    """dim z_g(mu#): nullity of ad(mu#) as an exact d x d matrix."""
    ad = g.ad_matrix(g.sharp(mu))
    return g.dim - rank(ad.to_dense())


def is_regular_semisimple(g: LieAlgebraData, mu: LinearFunctional) -> bool:
    g0 = g.sl_part()
    if g.central is not None:
        mu = LinearFunctional(mu.values[: g0.dim])
    if centralizer_dimension(g0, mu) != g0.r - 1:
        return False
    return is_diagonalizable(g0.matrix_of(g0.sharp(mu)))


def check_jacobi(g: LieAlgebraData) -> bool:
    d = g.dim
    for a in range(d):
        for b in range(d):
            for c in range(d):
                acc: dict[int, Fraction] = {}
                for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                    for k, v in g.bracket(x, y).items():
                        for m, w in g.bracket(k, z).items():
                            acc[m] = acc.get(m, 0) + v * w
                if any(acc.values()):
                    return False
    return True


def check_form_invariance(g: LieAlgebraData) -> bool:
    T = g.trace_form
    d = g.dim
    for x in range(d):
        for y in range(d):
            xy = g.bracket(x, y)
            for z in range(d):
                lhs = sum((c * T[k][z] for k, c in xy.items()), Fraction(0))
                rhs = sum((c * T[y][k] for k, c in g.bracket(x, z).items()), Fraction(0))
                if lhs + rhs:
                    return False
    return True


__all__ = [
    "ArityError",
    "InvalidRankError",
    "LieAlgebraData",
    "LinearFunctional",
    "TensorElement2",
    "build_gl",
    "build_sl",
    "casimir_tensor",
    "centralizer_dimension",
    "check_form_invariance",
    "check_jacobi",
    "is_diagonalizable",
    "is_regular_semisimple",
    "killing_form",
    "killing_scale",
]
