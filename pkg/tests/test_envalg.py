import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaudinlab.envalg import (
    NCElement,
    UAlgebra,
    UndefinedSymbolError,
    commutator,
    embed_factor,
    gelfand_tsetlin_generators,
    gl_matrix_unit,
    multiply,
    pbw_normal_form,
    principal_symbol,
    rewrite_normal_form,
    symmetrize,
)
from gaudinlab.experiments import draw_regular_cartan
from gaudinlab.liealg import ArityError, build_gl, build_sl
from gaudinlab.symalg import Polynomial, mf_generators, poisson_bracket

from strategies import polynomials, small_rationals

G2 = build_sl(2)
G3 = build_sl(3)
U2 = UAlgebra.of(G2)
U3 = UAlgebra.of(G3)


def E(U, text):
    return NCElement.from_text(U, text)


def test_pbw_examples():
    assert pbw_normal_form(U2, ["e"]) == U2.gen("e")
    assert pbw_normal_form(U2, ["f", "e"]) == E(U2, "1*e·f + -1*h")
    assert pbw_normal_form(U2, ["f", "h"]) == E(U2, "1*h·f + 2*f")


def test_multiply_and_commutator():
    e, h, f = (U2.gen(x) for x in "ehf")
    assert multiply(e, f) == E(U2, "1*e·f")
    assert commutator(e, f) == h


def test_casimir_lift_is_central():
    c = (U2.word("ef") + U2.word("fe")) * Fraction(1, 2) + U2.word("hh") * Fraction(1, 4)
    for x in "ehf":
        assert commutator(c, U2.gen(x)).is_zero()


def test_symmetrize_examples():
    P = lambda t: Polynomial.from_text(G2, t)
    assert symmetrize(P("1*h^2")) == U2.word("hh")
    assert symmetrize(P("1*e*f")) == E(U2, "1*e·f + -1/2*h")


def test_symmetrize_hef_six_orderings():
    expected = U2.zero()
    for perm in itertools.permutations("hef"):
        expected = expected + U2.word(perm)
    assert symmetrize(Polynomial.from_text(G2, "1*e*f*h")) == expected * Fraction(1, 6)


@given(polynomials(G2, 1, 4))
def test_symmetrize_identity_on_degree_one(p):
    s = symmetrize(p)
    assert s.degree() <= 1
    assert s == U2.element({tuple(a for a, k in enumerate(e) for _ in range(k)): c for e, c in p.terms.items()})


def test_principal_symbol_examples():
    assert principal_symbol(E(U2, "1*e·f + -1*h")) == Polynomial.from_text(G2, "1*e*f")
    with pytest.raises(UndefinedSymbolError):
        principal_symbol(U2.zero())


@given(polynomials(G3, 3, 3))
def test_symbol_of_symmetrization(p):
    if p.is_zero():
        return
    top = p.homogeneous_part(p.degree())
    if top.is_zero():
        return
    assert principal_symbol(symmetrize(top)) == top


@given(polynomials(G3, 2, 3), polynomials(G3, 2, 3))
def test_commutator_symbol_is_poisson_bracket(p, q):
    p2, q2 = p.homogeneous_part(2), q.homogeneous_part(2)
    if p2.is_zero() or q2.is_zero():
        return
    pb = poisson_bracket(p2, q2)
    if pb.is_zero():
        return
    c = commutator(symmetrize(p2), symmetrize(q2))
    assert c.degree() == 3
    assert principal_symbol(c) == pb


@given(polynomials(G3, 2, 3), polynomials(G3, 2, 3))
def test_gr_multiplicative(p, q):
    if p.is_zero() or q.is_zero():
        return
    a, b = symmetrize(p), symmetrize(q)
    prod = multiply(a, b)
    if prod.degree() == a.degree() + b.degree():
        assert principal_symbol(prod) == principal_symbol(a) * principal_symbol(b)


@pytest.mark.parametrize("g", [G2, G3], ids=["sl2", "sl3"])
def test_pbw_confluence_fuzz(g):
    U = UAlgebra.of(g)
    rng = random.Random(7)
    for k in range(100):
        w = [rng.randrange(g.dim) for _ in range(rng.randint(0, 5))]
        reference = pbw_normal_form(U, w)
        for strategy in ("leftmost", "rightmost", "random"):
            assert rewrite_normal_form(U, w, choose=strategy, seed=k) == reference


def test_normal_form_is_ordered():
    u = pbw_normal_form(U3, [7, 6, 5, 4, 3, 2, 1, 0])
    for m in u.terms:
        assert list(m) == sorted(m, key=U3.sort_key)


def test_embed_factor():
    e, h, f = (U2.gen(x) for x in "ehf")
    assert embed_factor(h, 1, 2).to_text() == "1*h⊗1"
    assert commutator(embed_factor(e, 1, 2), embed_factor(f, 2, 2)).is_zero()
    assert commutator(embed_factor(e, 1, 2), embed_factor(f, 1, 2)) == embed_factor(h, 1, 2)
    with pytest.raises(ArityError):
        embed_factor(e, 3, 2)


@given(st.lists(st.integers(0, 2), max_size=3), st.lists(st.integers(0, 2), max_size=3))
def test_embed_multiplicative(w1, w2):
    u, v = U2.word(w1), U2.word(w2)
    assert embed_factor(u * v, 2, 3) == embed_factor(u, 2, 3) * embed_factor(v, 2, 3)


def test_gt_r2_formula():
    g = build_gl(2)
    U = UAlgebra.of(g)
    E_ = lambda i, j: gl_matrix_unit(2, i, j)
    gens = gelfand_tsetlin_generators(2)
    assert len(gens) == 3
    assert gens[0] == E_(1, 1)
    assert gens[1] == E_(1, 1) + E_(2, 2)
    assert gens[2] == E_(1, 1) * E_(1, 1) + E_(1, 2) * E_(2, 1) + E_(2, 1) * E_(1, 2) + E_(2, 2) * E_(2, 2)
    assert gens[0] == (U.gen("h") + U.gen("I")) * Fraction(1, 2)


def test_gt_r3_commute():
    gens = gelfand_tsetlin_generators(3)
    assert len(gens) == 6
    for a, b in itertools.combinations(gens, 2):
        assert commutator(a, b).is_zero()


@pytest.mark.parametrize("g", [G2, G3], ids=["sl2", "sl3"])
def test_lifts_commute(g):
    rng = random.Random(11)
    U = UAlgebra.of(g)
    for _ in range(3):
        mu = draw_regular_cartan(g, rng)
        gens = mf_generators(g, mu).generators
        lifts = [symmetrize(p, U) for p in gens]
        for a, b in itertools.combinations(lifts, 2):
            assert commutator(a, b).is_zero()
        for s, p in zip(lifts, gens):
            assert principal_symbol(s) == p.homogeneous_part(p.degree())
            for h in g.cartan_indices:
                assert commutator(s, U.gen(h)).is_zero()


def test_text_round_trip():
    u = E(U3, "3/2*e12·h1·f23 + -1*h2 + 7")
    assert NCElement.from_text(U3, u.to_text()) == u


@given(small_rationals, small_rationals)
def test_scalars(a, b):
    assert (U2.one() * a) * (U2.one() * b) == U2.one() * (a * b)
