"""Convergence scans: s -> infinity factorization, the Gelfand-Tsetlin limit of
argument-shift algebras, and the dual-Verma degeneration z -> infinity."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .envalg import UAlgebra, embed_factor
from .gaudin import gt_family, one_point_algebra, quadratic_hamiltonians
from .liealg import LieAlgebraData, LinearFunctional, is_regular_semisimple
from .linalg import QMatrix, as_fraction, subspace_gap
from .repthy import Representation, act, build_irrep, tensor_rep
from .spectrum import spectrum_distance
from .verma import embed_in_deeper, mixed_module, required_depth, rescale_to_y


@dataclass
class LimitReport:
    kind: str
    grid: list[float]
    distances: dict[str, list[float]]
    slopes: dict[str, float | None]
    info: dict = field(default_factory=dict)
    skipped: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def monotone_decreasing(self, key: str) -> bool:
        d = self.distances[key]
        return all(b < a for a, b in zip(d, d[1:]))


def fit_slope(grid: Sequence[float], values: Sequence[float]) -> float | None:
    """Least-squares slope of log10(values) against log10(grid); None if any value is 0."""
    if len(grid) < 2 or any(v <= 0 or not math.isfinite(v) for v in values):
        return None
    x = np.log10(np.asarray(grid, dtype=float))
    y = np.log10(np.asarray(values, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def _map(fn: Callable, args: list, jobs: int) -> list:
    if jobs <= 1 or len(args) <= 1:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=min(jobs, len(args))) as ex:
        return list(ex.map(fn, *zip(*args)))


def _check_grid(grid: Sequence, increasing: bool = True) -> list[Fraction]:
    g = [as_fraction(x) for x in grid]
    pairs = list(zip(g, g[1:]))
    ok = all(a < b for a, b in pairs) if increasing else all(a > b for a, b in pairs)
    if not ok:
        raise ValueError(f"grid must be strictly {'increasing' if increasing else 'decreasing'}")
    if any(x <= 0 for x in g):
        raise ValueError("grid points must be positive")
    return g


# -- s -> infinity -----------------------------------------------------------------------

def _scaling_point(g, z, mu, s, rep):
    fam = quadratic_hamiltonians(g, [s * x for x in z], mu)
    U = UAlgebra.of(g)
    sharp = U.linear(g.sharp(mu))
    out = []
    for i, h in enumerate(fam.elements, start=1):
        limit = act(embed_factor(sharp, i, fam.n), rep).to_numpy()
        out.append(spectrum_distance(act(h, rep).to_numpy(), limit))
    return out


def scaling_limit_scan(
    g: LieAlgebraData, z: Sequence, mu: LinearFunctional, s_grid: Sequence, rep: Representation, jobs: int = 1
) -> LimitReport:
    """Sorted-spectrum distance between H_i(s z) and the limit operator (mu#)^{(i)}."""
    grid = _check_grid(s_grid)
    z = [as_fraction(x) for x in z]
    rows = _map(_scaling_point, [(g, z, mu, s, rep) for s in grid], jobs)
    names = [f"H{i}" for i in range(1, len(z) + 1)]
    dist = {name: [row[k] for row in rows] for k, name in enumerate(names)}
    dist["max"] = [max(row) for row in rows]
    gf = [float(s) for s in grid]
    slopes = {k: fit_slope(gf, v) for k, v in dist.items()}
    info = {"regular": is_regular_semisimple(g, mu), "dim": rep.dim}
    return LimitReport("scaling-limit", gf, dist, slopes, info)


# -- Gelfand-Tsetlin limit ---------------------------------------------------------------

def gt_direction(g: LieAlgebraData, t) -> LinearFunctional:
    """mu(t) with mu(t)# the traceless part of diag(t^(r-1), ..., t, 1)."""
    r = g.r
    t = as_fraction(t)
    d = [t ** (r - 1 - k) for k in range(r)]
    mean = sum(d) / r
    m = [[(d[i] - mean) if i == j else Fraction(0) for j in range(r)] for i in range(r)]
    return g.functional_from_matrix(m)


def _vec(m: QMatrix) -> list[Fraction]:
    n = m.shape[1]
    out = [Fraction(0)] * (m.shape[0] * n)
    for i, j, v in m.triples():
        out[i * n + j] = v
    return out


class _Echelon:
    """Incremental exact independence test; each stored row is reduced
    against the earlier ones and normalized at its pivot."""

    def __init__(self):
        self.rows: list[tuple[int, list[Fraction]]] = []

    def add(self, v: list[Fraction]) -> bool:
        v = list(v)
        for p, row in self.rows:
            c = v[p]
            if c:
                v = [x - c * y for x, y in zip(v, row)]
        p = next((k for k, x in enumerate(v) if x), None)
        if p is None:
            return False
        inv = 1 / v[p]
        self.rows.append((p, [x * inv for x in v]))
        return True


def generated_algebra(mats: Sequence[QMatrix], max_rounds: int = 64) -> list[QMatrix]:
    """Exact basis (as matrices) of the unital algebra generated by ``mats``."""
    n = mats[0].shape[0]
    ech = _Echelon()
    basis = [QMatrix.identity(n)]
    ech.add(_vec(basis[0]))

    def add(m: QMatrix) -> bool:
        if not m.is_zero() and ech.add(_vec(m)):
            basis.append(m)
            return True
        return False

    gens = list(mats)
    frontier = [m for m in gens if add(m)]
    rounds = 0
    while frontier and rounds < max_rounds and len(basis) < n * n:
        rounds += 1
        new = []
        for a in frontier:
            for gm in gens:
                p = gm @ a
                if add(p):
                    new.append(p)
        frontier = new
    return basis


def _algebra_basis_numpy(mats: Sequence[QMatrix]) -> np.ndarray:
    basis = generated_algebra(mats)
    return np.array([m.to_numpy().ravel() for m in basis]).T


def _normalized(m: QMatrix) -> QMatrix:
    s = m.max_abs()
    return m.scale(1 / s) if s else m


def _gt_point(g, t, rep, gt_basis):
    mu = gt_direction(g, t)
    if not is_regular_semisimple(g, mu):
        return None
    fam = one_point_algebra(g, mu)
    mats = [_normalized(act(u.slot(1), rep)) for u in fam.elements]
    basis = _algebra_basis_numpy(mats)
    return subspace_gap(basis, gt_basis), basis.shape[1]


def gt_limit_scan(g: LieAlgebraData, t_grid: Sequence, rep: Representation, jobs: int = 1) -> LimitReport:
    """Gap between the operator algebras of A_{mu(t)} and of the GT subalgebra on rep as t -> 0."""
    grid = _check_grid(t_grid, increasing=False)
    gt = gt_family(g.r)
    gt_mats = [_normalized(act(u.slot(1), rep)) for u in gt.elements]
    gt_basis = _algebra_basis_numpy(gt_mats)
    res = _map(_gt_point, [(g, t, rep, gt_basis) for t in grid], jobs)
    kept, gaps, dims, skipped = [], [], [], []
    for t, r in zip(grid, res):
        if r is None:
            skipped.append(float(t))
        else:
            kept.append(float(t))
            gaps.append(r[0])
            dims.append(r[1])
    # t decreases to 0, so the expected log-log slope of the gap is +1
    slopes = {"gap": fit_slope(kept, gaps)}
    info = {"gt_algebra_dim": int(gt_basis.shape[1]), "algebra_dims": dims, "dim": rep.dim}
    return LimitReport("gt-limit", kept, {"gap": gaps}, slopes, info, skipped)


# -- dual Verma degeneration -------------------------------------------------------------

def _verma_point(g, V, mu, z_points, z, depth, check_stability):
    chi = [z * mu.values[h] for h in g.cartan_indices]
    W, M = mixed_module(V, chi, depth)
    from .verma import mixed_singular_subspace

    S = mixed_singular_subspace(V, chi, depth)
    out = {"dim": S.dim}
    if check_stability:
        S2 = mixed_singular_subspace(V, chi, depth + 1)
        M2 = mixed_module(V, chi, depth + 1)[1]
        out["stable"] = embed_in_deeper(S, V, M, M2) == S2
    # rescaled coordinates y = z^ht x
    factors = np.array(rescale_to_y(M, V.dim, z))
    Sy = S.to_numpy() * factors[:, None]
    top = np.zeros((W.dim, V.dim))
    for v in range(V.dim):
        top[v * M.dim, v] = 1.0
    out["gap"] = subspace_gap(Sy, top)
    fam = quadratic_hamiltonians(g, list(z_points) + [z])
    limit = quadratic_hamiltonians(g, z_points, mu.scaled(-1))
    limit_plus = quadratic_hamiltonians(g, z_points, mu)
    dists, dists_plus = [], []
    for i in range(len(z_points)):
        R = S.restrict(act(fam.elements[i], W)).to_numpy()
        dists.append(spectrum_distance(R, act(limit.elements[i], V).to_numpy()))
        dists_plus.append(spectrum_distance(R, act(limit_plus.elements[i], V).to_numpy()))
    out["spec"] = dists
    out["spec_plus"] = dists_plus
    return out


def verma_limit_scan(
    g: LieAlgebraData,
    lambdas: Sequence,
    mu: LinearFunctional,
    z_points: Sequence,
    z_grid: Sequence,
    depth: int | None = None,
    check_stability: bool = True,
    jobs: int = 1,
) -> LimitReport:
    """Degeneration of the (n+1)-point mu=0 family on [V (x) M*_{z mu}]^sing as z -> infinity.

    Distances at each z: the gap between the rescaled singular subspace and
    V (x) 1, and the sorted-spectrum distance of each restricted H_i to the
    n-point non-homogeneous H_i.  The restricted operators converge to the
    family with parameter -mu; the spectra for +mu are also recorded (for
    sl_2 both coincide by Weyl-group symmetry).
    """
    g = g.sl_part()
    grid = _check_grid(z_grid)
    z_points = [as_fraction(x) for x in z_points]
    quadratic_hamiltonians(g, z_points)  # validates distinctness
    V = tensor_rep([build_irrep(g, lam) for lam in lambdas])
    need = required_depth(V)
    D = need if depth is None else depth
    rows = _map(_verma_point, [(g, V, mu, z_points, z, D, check_stability) for z in grid], jobs)
    gf = [float(z) for z in grid]
    n = len(z_points)
    dist = {"subspace_gap": [r["gap"] for r in rows]}
    for i in range(n):
        dist[f"H{i + 1}"] = [r["spec"][i] for r in rows]
    dist["spectrum_max"] = [max(r["spec"]) for r in rows]
    dist["spectrum_max_plus_mu"] = [max(r["spec_plus"]) for r in rows]
    slopes = {k: fit_slope(gf, v) for k, v in dist.items()}
    info = {
        "dims": [r["dim"] for r in rows],
        "dim_V": V.dim,
        "depth": D,
        "required_depth": need,
        "depth_stable": [r.get("stable") for r in rows],
    }
    return LimitReport("verma-limit", gf, dist, slopes, info)
