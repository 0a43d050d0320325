"""Exact rational linear algebra: sparse matrices, fraction-free elimination, subspaces."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

Q = Fraction


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact scalars; pass 'p/q' strings")
    return Fraction(x)


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class QMatrix:
    """Sparse matrix over Q, stored as a dict of row dicts.

    Instances are treated as immutable once built; every operation returns a
    new matrix.
    """

    __slots__ = ("shape", "rows")

    def __init__(self, shape: tuple[int, int], rows: dict[int, dict[int, Fraction]] | None = None):
        self.shape = (int(shape[0]), int(shape[1]))
        self.rows: dict[int, dict[int, Fraction]] = {}
        if rows:
            for i, row in rows.items():
                clean = {j: Fraction(v) for j, v in row.items() if v}
                if clean:
                    self.rows[i] = clean

    @classmethod
    def identity(cls, n: int, scale=1) -> "QMatrix":
        s = Fraction(scale)
        if not s:
            return cls((n, n))
        return cls((n, n), {i: {i: s} for i in range(n)})

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "QMatrix":
        return cls((n, n if m is None else m))

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence]) -> "QMatrix":
        n = len(dense)
        m = len(dense[0]) if n else 0
        rows = {}
        for i, row in enumerate(dense):
            r = {j: as_fraction(v) for j, v in enumerate(row) if v}
            if r:
                rows[i] = r
        return cls((n, m), rows)

    @classmethod
    def from_triples(cls, shape, triples: Iterable[tuple[int, int, Fraction]]) -> "QMatrix":
        rows: dict[int, dict[int, Fraction]] = {}
        for i, j, v in triples:
            v = as_fraction(v)
            if v:
                rows.setdefault(int(i), {})[int(j)] = v
        return cls(shape, rows)

    # -- inspection ---------------------------------------------------------
    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows.get(i, {}).get(j, Fraction(0))

    def triples(self) -> list[tuple[int, int, Fraction]]:
        """Nonzero entries in row-major order."""
        return [(i, j, self.rows[i][j]) for i in sorted(self.rows) for j in sorted(self.rows[i])]

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, tuple(self.triples())))

    def __repr__(self) -> str:
        return f"QMatrix(shape={self.shape}, nnz={self.nnz})"

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.shape[1] for _ in range(self.shape[0])]
        for i, row in self.rows.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def to_numpy(self, dtype=float) -> np.ndarray:
        out = np.zeros(self.shape, dtype=dtype)
        for i, row in self.rows.items():
            for j, v in row.items():
                out[i, j] = float(v) if dtype is float else v
        return out

    def max_abs(self) -> Fraction:
        return max((abs(v) for r in self.rows.values() for v in r.values()), default=Fraction(0))

    def is_diagonal(self) -> bool:
        return all(set(r) <= {i} for i, r in self.rows.items())

    def diagonal(self) -> list[Fraction]:
        return [self[i, i] for i in range(min(self.shape))]

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            tgt = rows.setdefault(i, {})
            for j, v in r.items():
                tgt[j] = tgt.get(j, 0) + v
        return QMatrix(self.shape, rows)

    def __neg__(self) -> "QMatrix":
        return QMatrix(self.shape, {i: {j: -v for j, v in r.items()} for i, r in self.rows.items()})

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def scale(self, c) -> "QMatrix":
        c = as_fraction(c)
        if not c:
            return QMatrix(self.shape)
        return QMatrix(self.shape, {i: {j: c * v for j, v in r.items()} for i, r in self.rows.items()})

    __rmul__ = scale

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        rows: dict[int, dict[int, Fraction]] = {}
        orows = other.rows
        for i, r in self.rows.items():
            acc: dict[int, Fraction] = {}
            for k, v in r.items():
                ok = orows.get(k)
                if not ok:
                    continue
                for j, w in ok.items():
                    acc[j] = acc.get(j, 0) + v * w
            if acc:
                rows[i] = acc
        return QMatrix((self.shape[0], other.shape[1]), rows)

    def apply(self, vec: Sequence[Fraction]) -> list[Fraction]:
        out = [Fraction(0)] * self.shape[0]
        for i, r in self.rows.items():
            s = Fraction(0)
            for j, v in r.items():
                if vec[j]:
                    s += v * vec[j]
            out[i] = s
        return out

    def T(self) -> "QMatrix":
        rows: dict[int, dict[int, Fraction]] = {}
        for i, r in self.rows.items():
            for j, v in r.items():
                rows.setdefault(j, {})[i] = v
        return QMatrix((self.shape[1], self.shape[0]), rows)

    def kron(self, other: "QMatrix") -> "QMatrix":
        n2, m2 = other.shape
        rows: dict[int, dict[int, Fraction]] = {}
        for i, r in self.rows.items():
            for k, orow in other.rows.items():
                tgt = rows.setdefault(i * n2 + k, {})
                for j, v in r.items():
                    for l, w in orow.items():
                        tgt[j * m2 + l] = v * w
        return QMatrix((self.shape[0] * n2, self.shape[1] * m2), rows)

    def commutator(self, other: "QMatrix") -> "QMatrix":
        return self @ other - other @ self

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "QMatrix":
        cidx = {c: k for k, c in enumerate(cols)}
        out = {}
        for a, i in enumerate(rows):
            r = self.rows.get(i)
            if not r:
                continue
            sub = {cidx[j]: v for j, v in r.items() if j in cidx}
            if sub:
                out[a] = sub
        return QMatrix((len(rows), len(cols)), out)


def kron_all(mats: Sequence[QMatrix]) -> QMatrix:
    out = mats[0]
    for m in mats[1:]:
        out = out.kron(m)
    return out


def vstack(mats: Sequence[QMatrix]) -> QMatrix:
    cols = mats[0].shape[1]
    rows = {}
    off = 0
    for m in mats:
        if m.shape[1] != cols:
            raise ValueError("column mismatch in vstack")
        for i, r in m.rows.items():
            rows[off + i] = dict(r)
        off += m.shape[0]
    return QMatrix((off, cols), rows)


# -- fraction-free elimination ----------------------------------------------

def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        fr = [as_fraction(v) for v in row]
        den = lcm(*(v.denominator for v in fr)) if fr else 1
        out.append([int(v * den) for v in fr])
    return out


def echelon_ff(rows: Sequence[Sequence]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free (Bareiss) row echelon form.

    Rows are first scaled to integers; every division performed is exact.
    Returns the nonzero echelon rows and their pivot columns.
    """
    m = _integer_rows(rows)
    nrows = len(m)
    if not nrows:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        prow = m[r]
        for i in range(r + 1, nrows):
            row = m[i]
            a = row[c]
            if a:
                for j in range(c + 1, ncols):
                    row[j] = (piv * row[j] - a * prow[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    row[j] = (piv * row[j]) // prev
            row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(echelon_ff(rows)[1])


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q (nonzero rows only) and pivot columns."""
    ech, pivots = echelon_ff(rows)
    red = [[Fraction(v) for v in row] for row in ech]
    for k in range(len(red) - 1, -1, -1):
        c = pivots[k]
        inv = 1 / red[k][c]
        red[k] = [v * inv for v in red[k]]
        for i in range(k):
            a = red[i][c]
            if a:
                red[i] = [x - a * y for x, y in zip(red[i], red[k])]
    return red, pivots


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right kernel {v : A v = 0}, one vector per free column."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows)
    pset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for k, c in enumerate(pivots):
            v[c] = -red[k][free]
        basis.append(v)
    return basis


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^N held by its canonical (reduced echelon) basis.

    ``basis`` lists the k spanning vectors; stacked as columns they form the
    N x k basis matrix in reduced column-echelon form, so two subspaces are
    equal iff their ``basis`` tuples are equal.
    """

    ambient: int
    basis: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, ambient: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = [list(v) for v in vectors]
        if not vecs:
            return cls(ambient, (), ())
        red, piv = rref(vecs)
        return cls(ambient, tuple(tuple(r) for r in red), tuple(piv))

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        basis = tuple(tuple(Fraction(int(i == j)) for j in range(ambient)) for i in range(ambient))
        return cls(ambient, basis, tuple(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> QMatrix:
        """N x k basis matrix."""
        return QMatrix.from_dense(self.basis).T()

    def coordinates(self, vec: Sequence[Fraction]) -> list[Fraction]:
        """Coordinates of ``vec`` in this basis; raises if vec is outside."""
        coords = [Fraction(vec[p]) for p in self.pivots]
        for i in range(self.ambient):
            s = sum((c * b[i] for c, b in zip(coords, self.basis) if b[i]), Fraction(0))
            if s != vec[i]:
                raise ValueError("vector not contained in subspace")
        return coords

    def contains(self, vec: Sequence[Fraction]) -> bool:
        try:
            self.coordinates(vec)
        except ValueError:
            return False
        return True

    def restrict(self, op: QMatrix) -> QMatrix:
        """Matrix of ``op`` on this subspace (k x k); raises if not invariant."""
        cols = []
        for b in self.basis:
            image = op.apply(b)
            try:
                cols.append(self.coordinates(image))
            except ValueError:
                raise InvariantSubspaceError("subspace is not invariant under operator") from None
        k = self.dim
        return QMatrix.from_dense([[cols[j][i] for j in range(k)] for i in range(k)]) if k else QMatrix((0, 0))

    def is_invariant(self, op: QMatrix) -> bool:
        try:
            self.restrict(op)
        except InvariantSubspaceError:
            return False
        return True

    def embed(self, new_ambient: int, index_map: Sequence[int]) -> "Subspace":
        """Image under the coordinate injection i -> index_map[i]."""
        vecs = []
        for b in self.basis:
            v = [Fraction(0)] * new_ambient
            for i, x in enumerate(b):
                v[index_map[i]] = x
            vecs.append(v)
        return Subspace.span(new_ambient, vecs)

    def to_numpy(self) -> np.ndarray:
        """N x k float basis matrix."""
        if not self.basis:
            return np.zeros((self.ambient, 0))
        return np.array([[float(x) for x in b] for b in self.basis]).T


class InvariantSubspaceError(ValueError):
    pass


def kernel_of(mats: Sequence[QMatrix]) -> Subspace:
    """Common kernel of a list of square matrices as a canonical subspace."""
    n = mats[0].shape[1]
    stacked = vstack(list(mats))
    dense = [[stacked[i, j] for j in range(n)] for i in stacked.rows]
    if not dense:
        return Subspace.full(n)
    return Subspace.span(n, nullspace(dense, n))


def subspace_gap(a: np.ndarray, b: np.ndarray) -> float:
    """Sine of the largest principal angle between column spans.

    Equals the spectral-norm distance of the orthogonal projectors; 1.0 when
    the dimensions differ.
    """
    if a.shape[1] != b.shape[1]:
        return 1.0
    if a.shape[1] == 0:
        return 0.0
    angles = scipy.linalg.subspace_angles(a, b)
    return float(np.sin(np.max(angles)))
