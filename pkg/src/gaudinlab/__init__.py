"""Exact Gaudin-model and argument-shift computations for sl_r."""

__version__ = "0.1.0"

from .liealg import LieAlgebraData, LinearFunctional, build_gl, build_sl, casimir_tensor, killing_form
from .symalg import Polynomial, invariant_generators, mf_generators, poisson_bracket, frozen_bracket
from .envalg import NCElement, NCTensorElement, UAlgebra, commutator, embed_factor, symmetrize, principal_symbol
from .repthy import Representation, act, build_irrep, singular_subspace, tensor_rep
from .verma import dual_verma, mixed_singular_subspace
from .gaudin import OperatorFamily, one_point_algebra, quadratic_hamiltonians, verify_commutativity
from .spectrum import SpectrumReport, joint_spectrum
from .scans import LimitReport, gt_limit_scan, scaling_limit_scan, verma_limit_scan

__all__ = [
    "LieAlgebraData",
    "LimitReport",
    "LinearFunctional",
    "NCElement",
    "NCTensorElement",
    "OperatorFamily",
    "Polynomial",
    "Representation",
    "SpectrumReport",
    "UAlgebra",
    "act",
    "build_gl",
    "build_irrep",
    "build_sl",
    "casimir_tensor",
    "commutator",
    "dual_verma",
    "embed_factor",
    "frozen_bracket",
    "gt_limit_scan",
    "invariant_generators",
    "joint_spectrum",
    "killing_form",
    "mf_generators",
    "mixed_singular_subspace",
    "one_point_algebra",
    "poisson_bracket",
    "principal_symbol",
    "quadratic_hamiltonians",
    "scaling_limit_scan",
    "singular_subspace",
    "symmetrize",
    "tensor_rep",
    "verify_commutativity",
    "verma_limit_scan",
]
