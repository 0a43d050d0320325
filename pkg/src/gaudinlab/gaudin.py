"""Commuting operator families: (non-homogeneous) Gaudin hamiltonians,
one-point argument-shift lifts, Gelfand-Tsetlin and Casimir elements."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .envalg import (
    NCTensorElement,
    UAlgebra,
    commutator,
    embed_factor,
    gelfand_tsetlin_generators,
    principal_symbol,
    symmetrize,
)
from .liealg import LieAlgebraData, LinearFunctional, casimir_tensor, killing_scale
from .linalg import as_fraction
from .symalg import casimir_polynomial, mf_generators


class DegeneratePointsError(ValueError):
    pass


@dataclass(eq=False)
class OperatorFamily:
    elements: list
    z: tuple[Fraction, ...]
    mu: LinearFunctional | None
    n: int
    provenance: str
    names: list[str] = field(default_factory=list)
    regular: bool = True

    def __post_init__(self):
        if not self.names:
            self.names = [f"{self.provenance}[{k}]" for k in range(len(self.elements))]

    def __len__(self):
        return len(self.elements)

    def extended(self, other: "OperatorFamily", provenance: str | None = None) -> "OperatorFamily":
        return OperatorFamily(
            self.elements + other.elements,
            self.z,
            self.mu,
            self.n,
            provenance or f"{self.provenance}+{other.provenance}",
            self.names + other.names,
            self.regular and other.regular,
        )


def killing_normalization(g: LieAlgebraData) -> Fraction:
    """Factor c with (Killing-orthonormal hamiltonian) = c * (trace-form hamiltonian)."""
    return Fraction(1, killing_scale(g.r))


def split_casimir(g: LieAlgebraData, i: int, k: int, n: int) -> NCTensorElement:
    """Omega_{ik} = sum_a x_a^{(i)} x^{a,(k)} in U(g)^{(x)n}."""
    U = UAlgebra.of(g)
    out = NCTensorElement(U, n)
    for (a, b), c in casimir_tensor(g).terms:
        t = [()] * n
        t[i - 1] = (a,)
        t[k - 1] = (b,)
        out = out + NCTensorElement(U, n, {tuple(t): c})
    return out


def _check_points(z: Sequence) -> tuple[Fraction, ...]:
    z = tuple(as_fraction(x) for x in z)
    if len(set(z)) != len(z):
        raise DegeneratePointsError(f"points z must be pairwise distinct, got {[str(x) for x in z]}")
    if not z:
        raise DegeneratePointsError("need at least one point")
    return z


def quadratic_hamiltonians(g: LieAlgebraData, z: Sequence, mu: LinearFunctional | None = None) -> OperatorFamily:
    """H_i = sum_{k != i} Omega_{ik}/(z_i - z_k) + (mu#)^{(i)}."""
    z = _check_points(z)
    n = len(z)
    mu = mu or g.zero_functional()
    U = UAlgebra.of(g)
    sharp = U.linear(g.sharp(mu))
    omegas = {}
    for i in range(1, n + 1):
        for k in range(i + 1, n + 1):
            omegas[(i, k)] = split_casimir(g, i, k, n)
            omegas[(k, i)] = split_casimir(g, k, i, n)
    hs = []
    for i in range(1, n + 1):
        h = embed_factor(sharp, i, n)
        for k in range(1, n + 1):
            if k != i:
                h = h + omegas[(i, k)] * (1 / (z[i - 1] - z[k - 1]))
        hs.append(h)
    return OperatorFamily(hs, z, mu, n, "quadratic", [f"H{i}" for i in range(1, n + 1)])


def slot_casimirs(g: LieAlgebraData, n: int, z: Sequence = ()) -> OperatorFamily:
    """Per-slot Casimirs c^{(i)} = (sum_a x_a x^a)^{(i)}."""
    c = symmetrize(casimir_polynomial(g))
    return OperatorFamily([embed_factor(c, i, n) for i in range(1, n + 1)], tuple(z), None, n, "casimirs",
                          [f"c{i}" for i in range(1, n + 1)])


def one_point_algebra(g: LieAlgebraData, mu: LinearFunctional) -> OperatorFamily:
    """Symmetrization lifts sigma(d_mu^n Phi_k) of the argument-shift generators."""
    fam = mf_generators(g, mu)
    U = UAlgebra.of(g)
    elems = [embed_factor(symmetrize(p, U), 1, 1) for p in fam.generators]
    names = [f"sigma(d^{n} Phi_{k})" for k, n in fam.labels]
    return OperatorFamily(elems, (), mu, 1, "one-point-MF", names, fam.regular)


def gt_family(r: int) -> OperatorFamily:
    gens = gelfand_tsetlin_generators(r)
    names = [f"G{k},{m}" for k in range(1, r + 1) for m in range(1, k + 1)]
    return OperatorFamily([embed_factor(u, 1, 1) for u in gens], (), None, 1, "GT", names)


@dataclass
class Violation:
    i: int
    j: int
    names: tuple[str, str]
    witness: str


def verify_commutativity(fam: OperatorFamily) -> list[Violation]:
    """Exact pairwise commutators; the empty list certifies commutativity."""
    out = []
    for i, j in combinations(range(len(fam.elements)), 2):
        c = commutator(fam.elements[i], fam.elements[j])
        if not c.is_zero():
            out.append(Violation(i, j, (fam.names[i], fam.names[j]), c.to_text()))
    return out


def sum_rule_defect(fam: OperatorFamily, g: LieAlgebraData) -> NCTensorElement:
    """sum_i H_i - sum_i (mu#)^{(i)}; zero for every quadratic family."""
    U = UAlgebra.of(g)
    sharp = U.linear(g.sharp(fam.mu or g.zero_functional()))
    total = sum(fam.elements, NCTensorElement(U, fam.n))
    for i in range(1, fam.n + 1):
        total = total - embed_factor(sharp, i, fam.n)
    return total


def symbol_defects(g: LieAlgebraData, mu: LinearFunctional) -> list[int]:
    """Indices k where principal_symbol(sigma(p_k)) != p_k for the MF generators."""
    fam = mf_generators(g, mu)
    bad = []
    for k, p in enumerate(fam.generators):
        if principal_symbol(symmetrize(p)) != p.homogeneous_part(p.degree()):
            bad.append(k)
    return bad


def cartan_invariance_defects(g: LieAlgebraData, mu: LinearFunctional) -> list[tuple[int, int]]:
    """Pairs (k, i) with [sigma(p_k), h_i] != 0."""
    fam = mf_generators(g, mu)
    U = UAlgebra.of(g)
    bad = []
    for k, p in enumerate(fam.generators):
        s = symmetrize(p, U)
        for i, h in enumerate(g.cartan_indices):
            if not commutator(s, U.gen(h)).is_zero():
                bad.append((k, i))
    return bad


def translation_invariance_check(
    g: LieAlgebraData, z: Sequence, b_samples: Sequence, mu: LinearFunctional | None = None, a_samples: Sequence = (3,)
) -> dict:
    """H_i(z + b) = H_i(z) exactly; for mu = 0 also H_i(a z + b) = H_i(z)/a."""
    base = quadratic_hamiltonians(g, z, mu)
    zq = base.z
    failures = []
    for b in b_samples:
        b = as_fraction(b)
        shifted = quadratic_hamiltonians(g, [x + b for x in zq], mu)
        for i, (h0, h1) in enumerate(zip(base.elements, shifted.elements)):
            if h0 != h1:
                failures.append({"kind": "translation", "b": str(b), "i": i + 1})
    checked_affine = []
    if mu is None or mu.is_zero():
        for a in a_samples:
            a = as_fraction(a)
            for b in b_samples:
                b = as_fraction(b)
                moved = quadratic_hamiltonians(g, [a * x + b for x in zq], mu)
                for i, (h0, h1) in enumerate(zip(base.elements, moved.elements)):
                    if h1 != h0 * (1 / a):
                        failures.append({"kind": "affine", "a": str(a), "b": str(b), "i": i + 1})
                checked_affine.append((str(a), str(b)))
    return {"ok": not failures, "failures": failures, "n": base.n, "affine_checked": checked_affine}


__all__ = [
    "DegeneratePointsError",
    "OperatorFamily",
    "Violation",
    "cartan_invariance_defects",
    "gt_family",
    "killing_normalization",
    "one_point_algebra",
    "quadratic_hamiltonians",
    "slot_casimirs",
    "split_casimir",
    "sum_rule_defect",
    "symbol_defects",
    "translation_invariance_check",
    "verify_commutativity",
]
