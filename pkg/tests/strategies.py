"""Shared hypothesis strategies and independent oracles for the test suite."""

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from gaudinlab.symalg import Polynomial

small_rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))


@st.composite
def polynomials(draw, g, max_degree=2, max_terms=4):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        deg = draw(st.integers(0, max_degree))
        letters = draw(st.lists(st.integers(0, g.dim - 1), min_size=deg, max_size=deg))
        e = [0] * g.dim
        for a in letters:
            e[a] += 1
        terms[tuple(e)] = terms.get(tuple(e), 0) + draw(small_rationals)
    return Polynomial(g, terms)


@st.composite
def words(draw, g, max_len=5):
    return tuple(draw(st.lists(st.integers(0, g.dim - 1), max_size=max_len)))


def to_sympy(p: Polynomial):
    syms = sympy.symbols(list(p.g.labels))
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        mono = sympy.Integer(1)
        for s, k in zip(syms, e):
            mono *= s**k
        expr += sympy.Rational(c.numerator, c.denominator) * mono
    return sympy.expand(expr), syms
