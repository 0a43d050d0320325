import itertools
from collections import Counter
from fractions import Fraction
from math import prod

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaudinlab.cache import cached_irrep, dumps_representation, loads_representation, cache_key
from gaudinlab.envalg import NCTensorElement, UAlgebra, commutator, embed_factor, symmetrize
from gaudinlab.gaudin import split_casimir
from gaudinlab.liealg import ArityError, build_sl
from gaudinlab.linalg import QMatrix
from gaudinlab.repthy import (
    InvalidWeightError,
    act,
    build_irrep,
    check_bracket_relations,
    singular_subspace,
    tensor_rep,
    weight_components,
    weyl_dimension,
)
from gaudinlab.symalg import casimir_polynomial

G2 = build_sl(2)
G3 = build_sl(3)


def hook_content_dim(r, lam):
    """Independent dimension oracle: hook-content formula for the partition of lam."""
    parts = [sum(lam[k:]) for k in range(len(lam))]
    num = den = 1
    for i, row in enumerate(parts):
        for j in range(row):
            arm = row - j - 1
            leg = sum(1 for p in parts[i + 1 :] if p > j)
            num *= r + j - i
            den *= arm + leg + 1
    return num // den


def sl2_singular_count(ms):
    """Clebsch-Gordan oracle: number of irreducible summands of V_m1 (x) ... ."""
    weights = Counter({0: 1})
    for m in ms:
        new = Counter()
        for w, c in weights.items():
            for k in range(-m, m + 1, 2):
                new[w + k] += c
        weights = new
    return sum(weights[k] - weights[k + 2] for k in range(0, max(weights) + 1))


@pytest.mark.parametrize("m", range(6))
def test_sl2_dims(m):
    assert build_irrep(G2, m).dim == m + 1


@pytest.mark.parametrize("r,lam", [(3, (1, 0)), (3, (1, 1)), (3, (2, 1)), (3, (0, 3)), (4, (1, 0, 1)), (4, (0, 1, 0))])
def test_dims_match_hook_content(r, lam):
    rep = build_irrep(build_sl(r), lam)
    assert rep.dim == hook_content_dim(r, lam) == weyl_dimension(r, lam)


def test_sl3_examples():
    assert build_irrep(G3, (1, 0)).dim == 3
    assert build_irrep(G3, (1, 1)).dim == 8


@pytest.mark.parametrize("g,lam", [(G2, 3), (G3, (1, 1)), (G3, (2, 0)), (build_sl(4), (0, 1, 0))])
def test_bracket_relations(g, lam):
    rep = build_irrep(g, lam)
    assert check_bracket_relations(rep) == []
    for a in g.cartan_indices:
        assert rep.matrices[a].is_diagonal()


def test_weights_shift_by_roots():
    rep = build_irrep(G3, (1, 1))
    for a in range(G3.dim):
        shift = G3.adjoint_weights[a]
        for i, j, _ in rep.matrices[a].triples():
            assert tuple(x + s for x, s in zip(rep.weights[j], shift)) == tuple(rep.weights[i])


@pytest.mark.parametrize("lam", [(-1,), (1, 0), ("x",)])
def test_invalid_weights(lam):
    with pytest.raises(InvalidWeightError):
        build_irrep(G2, lam)


@pytest.mark.parametrize("m", range(5))
def test_casimir_value(m):
    c = symmetrize(casimir_polynomial(G2))
    rep = build_irrep(G2, m)
    assert act(c, rep) == QMatrix.identity(rep.dim, Fraction(m * (m + 2), 2))


def test_tensor_rep_examples():
    v1 = build_irrep(G2, 1)
    vv = tensor_rep([v1, v1])
    assert vv.dim == 4
    assert sorted(w[0] for w in vv.weights) == [-2, 0, 0, 2]
    assert tensor_rep([v1, v1, v1]).dim == 8
    assert check_bracket_relations(vv) == []


def test_act_h1():
    v1 = build_irrep(G2, 1)
    vv = tensor_rep([v1, v1])
    U = UAlgebra.of(G2)
    m = act(embed_factor(U.gen("h"), 1, 2), vv)
    assert m.to_dense() == np.kron(np.diag([1, -1]), np.eye(2)).tolist()
    assert act(NCTensorElement.scalar(U, 2), vv) == QMatrix.identity(4)


def test_split_casimir_spectrum():
    v1 = build_irrep(G2, 1)
    vv = tensor_rep([v1, v1])
    om = act(split_casimir(G2, 1, 2, 2), vv)
    ev = sorted(np.linalg.eigvals(om.to_numpy()).real)
    assert ev == pytest.approx([-1.5, 0.5, 0.5, 0.5])
    # exact minimal polynomial (x - 1/2)(x + 3/2)
    I = QMatrix.identity(4)
    assert ((om - I.scale(Fraction(1, 2))) @ (om + I.scale(Fraction(3, 2)))).is_zero()


def test_arity_mismatch():
    vv = tensor_rep([build_irrep(G2, 1)] * 2)
    with pytest.raises(ArityError):
        act(embed_factor(UAlgebra.of(G2).gen("e"), 1, 3), vv)


@pytest.mark.parametrize("ms", [(1, 1), (1, 1, 1), (1, 2), (2, 2), (1, 1, 2)])
def test_singular_dims_sl2(ms):
    rep = tensor_rep([build_irrep(G2, m) for m in ms])
    assert singular_subspace(rep).dim == sl2_singular_count(ms)


@pytest.mark.parametrize("lams,count", [([(1, 0), (1, 0)], 2), ([(1, 0), (0, 1)], 2), ([(1, 1), (1, 1)], 6), ([(1, 1)], 1)])
def test_singular_dims_sl3(lams, count):
    # littlewood-richardson: 3x3 = 6+3b, 3x3b = 8+1, 8x8 = 27+10+10b+8+8+1
    rep = tensor_rep([build_irrep(G3, lam) for lam in lams])
    assert singular_subspace(rep).dim == count


def test_singular_space_is_weight_graded():
    rep = tensor_rep([build_irrep(G2, 1)] * 3)
    S = singular_subspace(rep)
    for a in G2.cartan_indices:
        assert S.is_invariant(rep.matrices[a])


def test_weight_components():
    vv = tensor_rep([build_irrep(G2, 1)] * 2)
    comps = weight_components(vv)
    assert {w[0]: s.dim for w, s in comps.items()} == {2: 1, 0: 2, -2: 1}
    v3 = tensor_rep([build_irrep(G2, 2), build_irrep(G2, 1)])
    dims = {w[0]: s.dim for w, s in weight_components(v3).items()}
    assert all(dims[w] == dims[-w] for w in dims)
    assert sum(dims.values()) == v3.dim


words = st.lists(st.integers(0, G3.dim - 1), max_size=3)


@given(words, words)
def test_act_is_homomorphism(w1, w2):
    rep = build_irrep(G3, (1, 1))
    U = UAlgebra.of(G3)
    u, v = U.word(w1), U.word(w2)
    A, B = act(u, rep), act(v, rep)
    assert act(u * v, rep) == A @ B
    assert act(commutator(u, v), rep) == A @ B - B @ A


@given(st.lists(st.integers(0, 2), max_size=2), st.lists(st.integers(0, 2), max_size=2), st.integers(1, 2))
def test_tensor_act_is_homomorphism(w1, w2, slot):
    rep = tensor_rep([build_irrep(G2, 1), build_irrep(G2, 2)])
    U = UAlgebra.of(G2)
    u = embed_factor(U.word(w1), slot, 2) + split_casimir(G2, 1, 2, 2)
    v = embed_factor(U.word(w2), 3 - slot, 2)
    assert act(u * v, rep) == act(u, rep) @ act(v, rep)


def test_cache_round_trip(tmp_path):
    rep = build_irrep(G3, (1, 1))
    text = dumps_representation(rep, cache_key(G3, (1, 1)))
    back = loads_representation(text)
    assert back.matrices == rep.matrices and back.weights == rep.weights and back.central == rep.central
    assert dumps_representation(back, cache_key(G3, (1, 1))) == text

    first = cached_irrep(G3, (1, 1), tmp_path)
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    raw = files[0].read_bytes()
    second = cached_irrep(G3, (1, 1), tmp_path)
    assert second.matrices == first.matrices == rep.matrices
    assert files[0].read_bytes() == raw


def test_cache_rejects_other_format(tmp_path):
    text = dumps_representation(build_irrep(G2, 1), "k").replace('"format_version":1', '"format_version":99')
    with pytest.raises(ValueError):
        loads_representation(text)
