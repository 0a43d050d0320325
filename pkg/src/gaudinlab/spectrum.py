"""Joint spectra of commuting exact operator families."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .linalg import QMatrix, Subspace
from .repthy import Representation, act

#: simple iff min gap / scale exceeds this
GAP_TOL = 1e-6
#: joint diagonalization accepted iff residual / scale stays below this
RESIDUAL_TOL = 1e-9


class NonCommutingFamilyError(ValueError):
    pass


@dataclass
class SpectrumReport:
    names: list[str]
    dim: int
    tuples: list[list[float]]
    multiplicities: list[int]
    distinct: list[list[float]]
    min_gap: float
    scale: float
    residual: float
    imag_max: float
    simple: bool
    ill_conditioned: bool
    gap_tol: float = GAP_TOL
    residual_tol: float = RESIDUAL_TOL
    seed: int = 0
    notes: list[str] = field(default_factory=list)
    #: imaginary parts of ``tuples``; all zero for real spectra
    tuples_imag: list[list[float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def operator_matrices(fam, rep: Representation, subspace: Subspace | None = None) -> list[QMatrix]:
    """Exact matrices of the family on rep, restricted to ``subspace`` if given.

    Raises InvariantSubspaceError when the subspace is not preserved.
    """
    mats = [act(u, rep) for u in fam.elements]
    if subspace is None:
        return mats
    return [subspace.restrict(m) for m in mats]


def _cluster(tuples: np.ndarray, tol: float) -> tuple[list[int], list[np.ndarray]]:
    reps: list[np.ndarray] = []
    counts: list[int] = []
    for t in tuples:
        for k, r in enumerate(reps):
            if np.max(np.abs(t - r)) <= tol:
                counts[k] += 1
                break
        else:
            reps.append(t)
            counts.append(1)
    return counts, reps


def joint_spectrum_of_matrices(
    mats: Sequence[np.ndarray],
    names: Sequence[str] | None = None,
    seed: int = 0,
    gap_tol: float = GAP_TOL,
    residual_tol: float = RESIDUAL_TOL,
) -> SpectrumReport:
    """Joint eigenvalue tuples of commuting square matrices.

    A seeded random combination L = sum c_k A_k is diagonalized; tuples are the
    diagonals of V^-1 A_k V and the residual is the largest off-diagonal entry
    left after that conjugation.
    """
    mats = [np.asarray(m, dtype=float) for m in mats]
    names = list(names) if names is not None else [f"A{k}" for k in range(len(mats))]
    dim = mats[0].shape[0] if mats else 0
    if dim == 0:
        return SpectrumReport(names, 0, [], [], [], float("inf"), 0.0, 0.0, 0.0, False, False, gap_tol, residual_tol, seed)
    rng = np.random.default_rng(seed)
    norms = [max(np.max(np.abs(m)), 1e-300) for m in mats]
    coeffs = rng.uniform(1.0, 2.0, len(mats))
    L = sum(c * m / s for c, m, s in zip(coeffs, mats, norms))
    _, vecs = np.linalg.eig(L)
    try:
        inv = np.linalg.inv(vecs)
    except np.linalg.LinAlgError:
        inv = np.linalg.pinv(vecs)
    conj = [inv @ m @ vecs for m in mats]
    diag = np.array([np.diag(c) for c in conj]).T  # dim x n_ops
    imag_max = float(np.max(np.abs(diag.imag))) if diag.size else 0.0
    tuples = diag
    scale = float(np.max(np.abs(tuples))) if tuples.size else 0.0
    scale = scale if scale > 0 else 1.0
    off = 0.0
    for c in conj:
        c = c.copy()
        np.fill_diagonal(c, 0)
        off = max(off, float(np.max(np.abs(c))) if c.size else 0.0)
    # primary key: real part of the first operator; imaginary parts break ties last
    order = np.lexsort(np.vstack([tuples.imag.T[::-1], tuples.real.T[::-1]]))
    tuples = tuples[order]
    if dim > 1:
        diffs = np.max(np.abs(tuples[:, None, :] - tuples[None, :, :]), axis=2)
        diffs[np.diag_indices(dim)] = np.inf
        min_gap = float(np.min(diffs))
    else:
        min_gap = float("inf")
    counts, reps = _cluster(tuples, gap_tol * scale)
    residual = off / scale
    ill = residual >= residual_tol
    simple = (min_gap / scale > gap_tol) and not ill
    notes = ["joint diagonalization residual above tolerance"] if ill else []
    return SpectrumReport(
        names,
        dim,
        tuples.real.tolist(),
        counts,
        [r.real.tolist() for r in reps],
        min_gap,
        scale,
        residual,
        imag_max,
        bool(simple),
        bool(ill),
        gap_tol,
        residual_tol,
        seed,
        notes,
        tuples.imag.tolist(),
    )


def joint_spectrum(
    fam,
    rep: Representation,
    subspace: Subspace | None = None,
    seed: int = 0,
    gap_tol: float = GAP_TOL,
    residual_tol: float = RESIDUAL_TOL,
    check_commutativity: bool = True,
) -> SpectrumReport:
    """SpectrumReport of an OperatorFamily acting on rep (or an invariant subspace)."""
    if check_commutativity:
        from .gaudin import verify_commutativity

        bad = verify_commutativity(fam)
        if bad:
            v = bad[0]
            raise NonCommutingFamilyError(f"[{v.names[0]}, {v.names[1]}] = {v.witness}")
    mats = operator_matrices(fam, rep, subspace)
    return joint_spectrum_of_matrices([m.to_numpy() for m in mats], fam.names, seed, gap_tol, residual_tol)


def sorted_spectrum(m: np.ndarray) -> np.ndarray:
    """Eigenvalues sorted by (real, imag)."""
    ev = np.linalg.eigvals(np.asarray(m, dtype=float))
    return ev[np.lexsort((ev.imag, ev.real))]


def spectrum_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Sup distance between sorted spectra of two square matrices of equal size."""
    sa, sb = sorted_spectrum(a), sorted_spectrum(b)
    if sa.shape != sb.shape:
        raise ValueError("spectra of different sizes")
    return float(np.max(np.abs(sa - sb))) if sa.size else 0.0
