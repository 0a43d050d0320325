from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaudinlab.envalg import NCTensorElement, UAlgebra, commutator, embed_factor
from gaudinlab.gaudin import (
    DegeneratePointsError,
    OperatorFamily,
    cartan_invariance_defects,
    gt_family,
    killing_normalization,
    one_point_algebra,
    quadratic_hamiltonians,
    slot_casimirs,
    split_casimir,
    sum_rule_defect,
    symbol_defects,
    translation_invariance_check,
    verify_commutativity,
)
from gaudinlab.liealg import build_sl
from gaudinlab.repthy import act, build_irrep, singular_subspace, tensor_rep, weight_components

G2 = build_sl(2)
G3 = build_sl(3)

points = st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=7), min_size=2, max_size=4, unique=True)


def test_two_point_example():
    fam = quadratic_hamiltonians(G2, [Fraction(1, 3), 2])
    om = split_casimir(G2, 1, 2, 2)
    assert fam.elements[0] == om * (1 / (Fraction(1, 3) - 2))
    assert fam.elements[1] == fam.elements[0] * -1
    assert fam.names == ["H1", "H2"]


def test_split_casimir_is_symmetric():
    assert split_casimir(G3, 1, 2, 2) == split_casimir(G3, 2, 1, 2)
    assert killing_normalization(G3) == Fraction(1, 6)


def test_one_point_family_is_mu_sharp():
    mu = G2.cartan_functional([3])
    fam = quadratic_hamiltonians(G2, [5], mu)
    U = UAlgebra.of(G2)
    assert fam.elements[0] == embed_factor(U.linear(G2.sharp(mu)), 1, 1)


@given(points)
@settings(max_examples=15)
def test_sum_rule(z):
    mu = G2.cartan_functional([Fraction(2, 5)])
    assert sum_rule_defect(quadratic_hamiltonians(G2, z, mu), G2).is_zero()
    assert sum_rule_defect(quadratic_hamiltonians(G2, z), G2).is_zero()


def test_degenerate_points():
    with pytest.raises(DegeneratePointsError):
        quadratic_hamiltonians(G2, [0, 1, 1])
    with pytest.raises(DegeneratePointsError):
        quadratic_hamiltonians(G2, [])


@pytest.mark.parametrize("g", [G2, G3])
def test_commutativity_three_points(g):
    z = [0, 1, Fraction(5, 2)]
    mu = g.cartan_functional(list(range(1, g.r)))
    for m in (g.zero_functional(), mu):
        fam = quadratic_hamiltonians(g, z, m).extended(slot_casimirs(g, 3, z))
        assert verify_commutativity(fam) == []


def test_commutativity_with_generic_mu():
    mu = G2.functional({"e": 2, "h": Fraction(-1, 3), "f": 5})
    fam = quadratic_hamiltonians(G2, [0, 1, -3, 7], mu)
    assert verify_commutativity(fam) == []


def test_adversarial_family_has_witness():
    U = UAlgebra.of(G2)
    fam = OperatorFamily([embed_factor(U.gen("e"), 1, 1), embed_factor(U.gen("f"), 1, 1)], (), None, 1, "test", ["e", "f"])
    vs = verify_commutativity(fam)
    assert len(vs) == 1
    assert vs[0].names == ("e", "f")
    assert vs[0].witness.replace(" ", "") in ("1*h", "h")


def test_translation_and_affine():
    z = [0, 1, Fraction(7, 2)]
    res = translation_invariance_check(G2, z, [5, Fraction(-2, 3)], a_samples=(3,))
    assert res["ok"] and res["failures"] == []
    assert ("3", "5") in res["affine_checked"]
    mu = G2.cartan_functional([1])
    res = translation_invariance_check(G2, z, [5], mu=mu)
    assert res["ok"] and res["affine_checked"] == []


def test_mu_is_not_affine_covariant():
    mu = G2.cartan_functional([1])
    base = quadratic_hamiltonians(G2, [0, 1], mu)
    moved = quadratic_hamiltonians(G2, [0, 3], mu)
    assert moved.elements[0] != base.elements[0] * Fraction(1, 3)


def test_singular_subspace_is_invariant_for_zero_mu():
    rep = tensor_rep([build_irrep(G2, 1)] * 3)
    S = singular_subspace(rep)
    for h in quadratic_hamiltonians(G2, [0, 1, 3]).elements:
        assert S.is_invariant(act(h, rep))


def test_weight_components_invariant_for_cartan_mu():
    rep = tensor_rep([build_irrep(G3, (1, 0)), build_irrep(G3, (0, 1))])
    mu = G3.cartan_functional([1, 3])
    comps = weight_components(rep)
    for h in quadratic_hamiltonians(G3, [0, 2], mu).elements:
        m = act(h, rep)
        assert all(S.is_invariant(m) for S in comps.values())


def test_one_point_sl2():
    mu = G2.cartan_functional([1])
    fam = one_point_algebra(G2, mu)
    U = UAlgebra.of(G2)
    c = slot_casimirs(G2, 1).elements[0]
    assert len(fam) == 2
    assert fam.elements[0] == c * Fraction(1, 2)
    assert fam.elements[1] == embed_factor(U.gen("h"), 1, 1) * Fraction(1, 2)
    assert fam.regular


def test_one_point_sl3():
    mu = G3.cartan_functional([1, 2])
    fam = one_point_algebra(G3, mu)
    assert len(fam) == 5
    pairs = list(combinations(fam.elements, 2))
    assert len(pairs) == 10
    assert all(commutator(a, b).is_zero() for a, b in pairs)
    assert symbol_defects(G3, mu) == []
    assert cartan_invariance_defects(G3, mu) == []


def test_one_point_non_cartan_mu():
    mu = G3.functional({"e12": 1, "h1": 2, "f23": -3})
    with pytest.warns(UserWarning, match="regular"):
        fam = one_point_algebra(G3, mu)
    assert verify_commutativity(fam) == []


@pytest.mark.parametrize("r", [2, 3])
def test_gt_family_commutes(r):
    fam = gt_family(r)
    assert len(fam) == r * (r + 1) // 2
    assert verify_commutativity(fam) == []


def test_casimirs_are_central():
    U = UAlgebra.of(G3)
    c = slot_casimirs(G3, 1).elements[0]
    for a in range(G3.dim):
        assert commutator(c, embed_factor(U.gen(a), 1, 1)).is_zero()
    assert isinstance(c, NCTensorElement)
