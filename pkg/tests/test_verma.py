from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaudinlab.liealg import build_sl
from gaudinlab.repthy import build_irrep, tensor_rep
from gaudinlab.verma import (
    DepthError,
    cached_dual_verma,
    dual_verma,
    dumps_dual_verma,
    embed_in_deeper,
    loads_dual_verma,
    mixed_module,
    mixed_singular_subspace,
    required_depth,
)

G2 = build_sl(2)
G3 = build_sl(3)
E, H, F = (G2.labels.index(x) for x in "ehf")

chis = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@given(chis, st.integers(0, 4))
def test_sl2_closed_form(chi, D):
    # xi_n dual to f^n v: e xi_{n+1} = xi_n, h xi_n = (chi - 2n) xi_n, f xi_n = (n+1)(chi-n) xi_{n+1}
    M = dual_verma(G2, chi, D)
    assert M.dim == D + 1
    assert M.depths == tuple(range(D + 1))
    for n in range(D + 1):
        assert M.matrices[H][(n, n)] == chi - 2 * n
        if n < D:
            assert M.matrices[E][(n, n + 1)] == 1
            assert M.matrices[F][(n + 1, n)] == (n + 1) * (chi - n)
    assert len(list(M.matrices[E].triples())) == D
    assert sum(1 for _ in M.matrices[F].triples()) <= D


def _interior_bracket_defects(M, g):
    """[x_a, x_b] - sum c x_c applied to basis vectors well below the truncation."""
    top = max(-g.height_of[a] for a in g.f_indices)
    cols = M.depth_slice(M.depth - 2 * top)
    bad = []
    for a in range(g.dim):
        for b in range(g.dim):
            lhs = M.matrices[a] @ M.matrices[b] - M.matrices[b] @ M.matrices[a]
            rhs = None
            for c, v in g.bracket(a, b).items():
                term = M.matrices[c].scale(v)
                rhs = term if rhs is None else rhs + term
            d = lhs if rhs is None else lhs - rhs
            if any(j in cols for _, j, _ in d.triples()):
                bad.append((a, b))
    return bad


@pytest.mark.parametrize("g,chi,D", [(G2, Fraction(7, 3), 4), (G3, (Fraction(1, 2), Fraction(-3)), 4)])
def test_interior_brackets(g, chi, D):
    M = dual_verma(g, chi, D)
    assert _interior_bracket_defects(M, g) == []


def test_sl3_depth_one_has_two_simple_slots():
    M = dual_verma(G3, (1, 2), 1)
    assert M.dim == 3
    assert sorted(M.depths) == [0, 1, 1]


def test_mixed_singular_dim_matches_dim_v():
    V = tensor_rep([build_irrep(G2, 1)] * 2)
    assert required_depth(V) == 2
    S = mixed_singular_subspace(V, Fraction(7, 3), 2)
    assert S.dim == 4 == V.dim


def test_trivial_factor():
    V = build_irrep(G2, 0)
    assert required_depth(V) == 0
    assert mixed_singular_subspace(V, 5).dim == 1


def test_depth_error():
    V = tensor_rep([build_irrep(G2, 1)] * 2)
    with pytest.raises(DepthError):
        mixed_module(V, 1, 1)
    with pytest.raises(DepthError):
        dual_verma(G2, 1, -1)


def test_chi_zero_is_computed():
    # chi = 0 is a reducible point of the Verma module, the computation still goes through
    V = tensor_rep([build_irrep(G2, 1)] * 2)
    assert mixed_singular_subspace(V, 0).dim == V.dim


@pytest.mark.parametrize("chi", [Fraction(7, 3), Fraction(-5, 2), Fraction(11)])
def test_depth_stability(chi):
    V = tensor_rep([build_irrep(G2, 1), build_irrep(G2, 2)])
    D = required_depth(V)
    S = mixed_singular_subspace(V, chi, D)
    for extra in (1, 2):
        M = mixed_module(V, chi, D)[1]
        M2 = mixed_module(V, chi, D + extra)[1]
        assert embed_in_deeper(S, V, M, M2) == mixed_singular_subspace(V, chi, D + extra)


def test_sl3_mixed_singular_dim():
    V = build_irrep(G3, (1, 0))
    assert mixed_singular_subspace(V, (Fraction(1, 3), Fraction(5, 7))).dim == 3


def test_cache_round_trip(tmp_path):
    M = dual_verma(G3, (Fraction(1, 2), -3), 3)
    back = loads_dual_verma(dumps_dual_verma(M))
    assert back.matrices == M.matrices and back.monomials == M.monomials and back.chi == M.chi
    first = cached_dual_verma(G3, (Fraction(1, 2), -3), 3, tmp_path)
    second = cached_dual_verma(G3, (Fraction(1, 2), -3), 3, tmp_path)
    assert first.matrices == second.matrices == M.matrices
    assert len(list(tmp_path.glob("dverma-*.json"))) == 1
    other = cached_dual_verma(G3, (Fraction(1, 2), -3), 2, tmp_path)
    assert other.dim < M.dim
