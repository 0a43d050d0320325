"""The experiment registry: each entry turns an ExperimentConfig into an Outcome."""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .config import ExperimentConfig
from .envalg import principal_symbol
from .gaudin import (
    cartan_invariance_defects,
    gt_family,
    killing_normalization,
    one_point_algebra,
    quadratic_hamiltonians,
    slot_casimirs,
    sum_rule_defect,
    translation_invariance_check,
    verify_commutativity,
)
from .liealg import LieAlgebraData, LinearFunctional, build_sl, is_regular_semisimple
from .linalg import format_fraction
from .repthy import build_irrep, singular_subspace, tensor_rep
from .scans import gt_limit_scan, scaling_limit_scan, verma_limit_scan
from .spectrum import GAP_TOL, RESIDUAL_TOL, joint_spectrum
from .symalg import frozen_bracket, jacobian_rank, mf_generators, poisson_bracket


@dataclass
class Outcome:
    result: dict
    exact_checks: dict[str, bool] = field(default_factory=dict)
    numeric_checks: dict[str, bool] = field(default_factory=dict)
    csv_header: list[str] = field(default_factory=list)
    csv_rows: list[list] = field(default_factory=list)
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.exact_checks.values())


@dataclass(frozen=True)
class ExperimentInfo:
    name: str
    summary: str
    tests: str
    details: str


# -- seeded draws ------------------------------------------------------------------------

def random_rational(rng: random.Random, bound: int = 100) -> Fraction:
    den = rng.randint(1, bound)
    return Fraction(rng.randint(-bound, bound), den)


def draw_points(rng: random.Random, n: int) -> tuple[Fraction, ...]:
    pts: list[Fraction] = []
    while len(pts) < n:
        x = random_rational(rng)
        if x not in pts:
            pts.append(x)
    return tuple(pts)


def draw_regular_cartan(g: LieAlgebraData, rng: random.Random) -> LinearFunctional:
    """Seeded mu vanishing on root vectors with mu# regular semisimple."""
    while True:
        mu = g.cartan_functional([random_rational(rng) for _ in g.cartan_indices])
        if is_regular_semisimple(g, mu):
            return mu


def draw_point(g: LieAlgebraData, rng: random.Random) -> LinearFunctional:
    return LinearFunctional(tuple(random_rational(rng) for _ in range(g.dim)))


def _mu(cfg: ExperimentConfig, g: LieAlgebraData, rng: random.Random, default: str) -> LinearFunctional:
    """mu from the config; otherwise ``default`` = 'zero' or 'regular' (seeded)."""
    if cfg.mu is not None:
        return g.functional(cfg.mu_map)
    return g.zero_functional() if default == "zero" else draw_regular_cartan(g, rng)


def _mu_text(g: LieAlgebraData, mu: LinearFunctional) -> dict[str, str]:
    return {g.labels[a]: format_fraction(v) for a, v in enumerate(mu.values) if v}


def _weights(cfg: ExperimentConfig, default: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    return list(cfg.weights) if cfg.weights else default


def _violations_json(vs) -> list[dict]:
    return [{"i": v.i, "j": v.j, "names": list(v.names), "witness": v.witness} for v in vs]


# -- experiments -------------------------------------------------------------------------

def run_commutativity(cfg: ExperimentConfig) -> Outcome:
    g = build_sl(cfg.r)
    rng = random.Random(cfg.seed)
    n = len(cfg.z) if cfg.z is not None else max(len(cfg.weights), 3)
    z = cfg.z if cfg.z is not None else draw_points(rng, n)
    mu = _mu(cfg, g, rng, "zero")
    fam = quadratic_hamiltonians(g, z, mu)
    if cfg.casimirs:
        fam = fam.extended(slot_casimirs(g, fam.n, fam.z))
    bad = verify_commutativity(fam)
    sum_ok = sum_rule_defect(quadratic_hamiltonians(g, z, mu), g).is_zero()
    pairs = len(fam) * (len(fam) - 1) // 2
    res = {
        "algebra": f"sl{g.r}",
        "n": fam.n,
        "z": [format_fraction(x) for x in fam.z],
        "mu": _mu_text(g, mu),
        "operators": fam.names,
        "pairs_checked": pairs,
        "violations": _violations_json(bad),
        "sum_rule_zero": sum_ok,
        "killing_rescale": format_fraction(killing_normalization(g)),
        "hamiltonians": [h.to_text() for h in fam.elements[: fam.n]],
    }
    rows = [[i, j, fam.names[i], fam.names[j], 0] for i in range(len(fam)) for j in range(i + 1, len(fam))]
    badset = {(v.i, v.j) for v in bad}
    for row in rows:
        row[4] = int((row[0], row[1]) not in badset)
    return Outcome(
        res,
        {"commute": not bad, "sum_rule": sum_ok},
        csv_header=["i", "j", "name_i", "name_j", "commute"],
        csv_rows=rows,
        witnesses=_violations_json(bad),
    )


def run_mf_classical(cfg: ExperimentConfig) -> Outcome:
    g = build_sl(cfg.r)
    rng = random.Random(cfg.seed)
    mu = _mu(cfg, g, rng, "regular")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fam = mf_generators(g, mu)
    gens = fam.generators
    ts = [random_rational(rng) for _ in range(5)]
    bad = []
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            pb = poisson_bracket(gens[i], gens[j])
            fb = frozen_bracket(gens[i], gens[j], mu)
            for t in ts:
                if not (pb + fb * t).is_zero():
                    bad.append({"i": i, "j": j, "t": format_fraction(t)})
    expected = (g.dim + g.r - 1) // 2
    points = [draw_point(g, rng) for _ in range(3)]
    ranks = [jacobian_rank(gens, p) for p in points]
    res = {
        "algebra": f"sl{g.r}",
        "mu": _mu_text(g, mu),
        "regular": fam.regular,
        "generators": [p.to_text() for p in gens],
        "labels": [list(x) for x in fam.labels],
        "count": len(gens),
        "expected_count": expected,
        "t_samples": [format_fraction(t) for t in ts],
        "pencil_violations": bad,
        "jacobian_ranks": ranks,
    }
    exact = {"pencil": not bad}
    if fam.regular:
        exact["count"] = len(gens) == expected
        exact["independent"] = all(r == expected for r in ranks)
    rows = [[k, list(fam.labels[k]), p.degree(), p.to_text()] for k, p in enumerate(gens)]
    return Outcome(res, exact, csv_header=["index", "k_n", "degree", "polynomial"], csv_rows=rows, witnesses=bad)


def run_one_point(cfg: ExperimentConfig) -> Outcome:
    g = build_sl(cfg.r)
    rng = random.Random(cfg.seed)
    mu = _mu(cfg, g, rng, "regular")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fam = one_point_algebra(g, mu)
        mf = mf_generators(g, mu)
    bad = verify_commutativity(fam)
    symbols_ok = []
    for u, p in zip(fam.elements, mf.generators):
        symbols_ok.append(principal_symbol(u.slot(1)) == p.homogeneous_part(p.degree()))
    in_cartan = all(not mu.values[a] for a in range(g.dim) if a not in g.cartan_indices)
    res = {
        "algebra": f"sl{g.r}",
        "mu": _mu_text(g, mu),
        "regular": fam.regular,
        "lifts": [u.slot(1).to_text() for u in fam.elements],
        "names": fam.names,
        "violations": _violations_json(bad),
        "symbols_match": symbols_ok,
        "mu_in_cartan": in_cartan,
    }
    exact = {"commute": not bad, "principal_symbols": all(symbols_ok)}
    if in_cartan:
        cart = cartan_invariance_defects(g, mu)
        res["cartan_defects"] = [list(x) for x in cart]
        exact["cartan_invariance"] = not cart
    rows = [[k, fam.names[k], int(symbols_ok[k]), u.slot(1).to_text()] for k, u in enumerate(fam.elements)]
    return Outcome(res, exact, csv_header=["index", "name", "symbol_ok", "lift"], csv_rows=rows,
                   witnesses=_violations_json(bad))


def _spectrum_setup(cfg: ExperimentConfig):
    g = build_sl(cfg.r)
    rng = random.Random(cfg.seed)
    if cfg.family == "gt":
        lam = _weights(cfg, [(1,) * (g.r - 1)])[0]
        rep = build_irrep(g, lam)
        return g, gt_family(g.r), rep, None, {"weight": list(lam)}
    if cfg.family == "one-point":
        lam = _weights(cfg, [(1,) * (g.r - 1)])[0]
        mu = _mu(cfg, g, rng, "regular")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            fam = one_point_algebra(g, mu)
        return g, fam, build_irrep(g, lam), None, {"weight": list(lam), "mu": _mu_text(g, mu)}
    weights = _weights(cfg, [(1,) * (g.r - 1)] * 2)
    z = cfg.z if cfg.z is not None else draw_points(rng, len(weights))
    mu = _mu(cfg, g, rng, "regular")
    fam = quadratic_hamiltonians(g, z, mu)
    if cfg.casimirs:
        fam = fam.extended(slot_casimirs(g, fam.n, fam.z))
    rep = tensor_rep([build_irrep(g, w) for w in weights])
    mode = cfg.subspace or ("singular" if mu.is_zero() else "full")
    sub = singular_subspace(rep) if mode == "singular" else None
    meta = {
        "weights": [list(w) for w in weights],
        "z": [format_fraction(x) for x in fam.z],
        "mu": _mu_text(g, mu),
        "subspace": mode,
        "killing_rescale": format_fraction(killing_normalization(g)),
    }
    return g, fam, rep, sub, meta


def run_spectrum(cfg: ExperimentConfig) -> Outcome:
    g, fam, rep, sub, meta = _spectrum_setup(cfg)
    bad = verify_commutativity(fam)
    if bad:
        res = {"algebra": f"sl{g.r}", **meta, "family": fam.provenance, "violations": _violations_json(bad)}
        return Outcome(res, {"commute": False}, witnesses=_violations_json(bad))
    rep_ = joint_spectrum(
        fam, rep, sub, seed=cfg.seed, gap_tol=cfg.tol("gap", GAP_TOL), residual_tol=cfg.tol("residual", RESIDUAL_TOL),
        check_commutativity=False,
    )
    res = {"algebra": f"sl{g.r}", **meta, "family": fam.provenance, "dim_rep": rep.dim, "spectrum": rep_.to_dict()}
    rows = [[k] + t for k, t in enumerate(rep_.tuples)]
    return Outcome(
        res,
        {"commute": True, "multiplicities_sum": sum(rep_.multiplicities) == rep_.dim},
        {"simple": rep_.simple, "well_conditioned": not rep_.ill_conditioned},
        csv_header=["index"] + fam.names,
        csv_rows=rows,
    )


def _limit_rows(rep) -> tuple[list[str], list[list]]:
    keys = list(rep.distances)
    rows = [[x] + [rep.distances[k][i] for k in keys] for i, x in enumerate(rep.grid)]
    return ["grid"] + keys, rows


def _slope_ok(slope, target, tol) -> bool:
    return slope is not None and abs(slope - target) <= tol


def run_scaling_limit(cfg: ExperimentConfig) -> Outcome:
    g = build_sl(cfg.r)
    rng = random.Random(cfg.seed)
    weights = _weights(cfg, [(1,) * (g.r - 1)] * 2)
    z = cfg.z if cfg.z is not None else (Fraction(0), Fraction(1))[: len(weights)] + draw_points(rng, max(0, len(weights) - 2))
    mu = _mu(cfg, g, rng, "regular")
    grid = cfg.grid or tuple(Fraction(10**k) for k in range(1, 5))
    rep = tensor_rep([build_irrep(g, w) for w in weights])
    lr = scaling_limit_scan(g, z, mu, grid, rep, jobs=cfg.jobs)
    tol = cfg.tol("slope", 0.1)
    res = {
        "algebra": f"sl{g.r}",
        "weights": [list(w) for w in weights],
        "z": [format_fraction(x) for x in z],
        "mu": _mu_text(g, mu),
        "limit": lr.to_dict(),
        "expected_slope": -1.0,
        "slope_tolerance": tol,
    }
    header, rows = _limit_rows(lr)
    return Outcome(res, {}, {"slope": _slope_ok(lr.slopes["max"], -1.0, tol)}, header, rows)


def run_gt_limit(cfg: ExperimentConfig) -> Outcome:
    g = build_sl(cfg.r)
    lam = _weights(cfg, [(1,) * (g.r - 1)])[0]
    grid = cfg.grid or (Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000))
    rep = build_irrep(g, lam)
    gt = gt_family(g.r)
    bad = verify_commutativity(gt)
    lr = gt_limit_scan(g, sorted(grid, reverse=True), rep, jobs=cfg.jobs)
    spec = joint_spectrum(gt, rep, seed=cfg.seed, gap_tol=cfg.tol("gap", GAP_TOL), check_commutativity=False)
    res = {
        "algebra": f"sl{g.r}",
        "weight": list(lam),
        "gt_violations": _violations_json(bad),
        "gt_spectrum": spec.to_dict(),
        "limit": lr.to_dict(),
    }
    header, rows = _limit_rows(lr)
    # for sl_2 the two algebras coincide for every t, so a zero gap also counts
    vanishing = bool(lr.distances["gap"]) and max(lr.distances["gap"]) < 1e-10
    converging = len(lr.grid) >= 2 and lr.monotone_decreasing("gap")
    numeric = {"gap_decreasing": converging or vanishing, "gt_simple": spec.simple}
    return Outcome(res, {"gt_commute": not bad}, numeric, header, rows, _violations_json(bad))


def run_verma_limit(cfg: ExperimentConfig) -> Outcome:
    g = build_sl(cfg.r)
    rng = random.Random(cfg.seed)
    weights = _weights(cfg, [(1,) * (g.r - 1)] * 2)
    z = cfg.z if cfg.z is not None else (Fraction(0), Fraction(1))[: len(weights)] + draw_points(rng, max(0, len(weights) - 2))
    if cfg.mu is not None:
        mu = g.functional(cfg.mu_map)
    else:
        mu = g.cartan_functional([1] * (g.r - 1))
    grid = cfg.grid or (Fraction(10), Fraction(100), Fraction(1000))
    lr = verma_limit_scan(g, weights, mu, z, grid, depth=cfg.depth, jobs=cfg.jobs)
    tol = cfg.tol("slope", 0.2)
    dim_v = lr.info["dim_V"]
    res = {
        "algebra": f"sl{g.r}",
        "weights": [list(w) for w in weights],
        "z": [format_fraction(x) for x in z],
        "mu": _mu_text(g, mu),
        "limit": lr.to_dict(),
        "expected_slope": -1.0,
        "slope_tolerance": tol,
    }
    header, rows = _limit_rows(lr)
    header.insert(1, "dim")
    for row, d in zip(rows, lr.info["dims"]):
        row.insert(1, d)
    exact = {
        "dims_equal_dim_V": all(d == dim_v for d in lr.info["dims"]),
        "depth_stable": all(lr.info["depth_stable"]),
    }
    numeric = {
        "gap_slope": _slope_ok(lr.slopes["subspace_gap"], -1.0, tol),
        "spectrum_slope": _slope_ok(lr.slopes["spectrum_max"], -1.0, tol),
    }
    return Outcome(res, exact, numeric, header, rows)


def run_translation_check(cfg: ExperimentConfig) -> Outcome:
    g = build_sl(cfg.r)
    rng = random.Random(cfg.seed)
    z = cfg.z if cfg.z is not None else draw_points(rng, 2)
    mu = _mu(cfg, g, rng, "zero")
    bs = [random_rational(rng) for _ in range(3)]
    a_samples = [Fraction(3), random_rational(rng) or Fraction(2)]
    rep = translation_invariance_check(g, z, bs, mu, a_samples)
    res = {
        "algebra": f"sl{g.r}",
        "z": [format_fraction(x) for x in z],
        "mu": _mu_text(g, mu),
        "b_samples": [format_fraction(b) for b in bs],
        "a_samples": [format_fraction(a) for a in a_samples] if mu.is_zero() else [],
        **rep,
    }
    rows = [[f["kind"], f.get("a", ""), f.get("b", ""), f["i"]] for f in rep["failures"]]
    return Outcome(res, {"invariant": rep["ok"]}, csv_header=["kind", "a", "b", "i"], csv_rows=rows,
                   witnesses=rep["failures"])


REGISTRY: dict[str, tuple[Callable[[ExperimentConfig], Outcome], ExperimentInfo]] = {
    "commutativity": (run_commutativity, ExperimentInfo(
        "commutativity",
        "Exact pairwise commutators of the quadratic Gaudin hamiltonians (plus per-slot Casimirs).",
        "commutativity of the Gaudin hamiltonians and of their non-homogeneous version (Proposition 5)",
        "Builds H_i = sum_k Omega_ik/(z_i - z_k) + (mu#)^(i) in U(sl_r)^(x)n and checks [H_i, H_j] = 0 and "
        "sum_i H_i = sum_i (mu#)^(i) exactly.  Fields: algebra, z, mu (default 0), casimirs.",
    )),
    "mf-classical": (run_mf_classical, ExperimentInfo(
        "mf-classical",
        "Argument-shift generators in S(g): pencil brackets and algebraic independence.",
        "Facts 1 and 2 (Mishchenko-Fomenko): commutativity for every bracket of the pencil and the "
        "generator count (dim g + rk g)/2",
        "Checks {f,g} + t{f,g}_mu = 0 for five seeded t and the exact Jacobian rank at three seeded points.",
    )),
    "one-point": (run_one_point, ExperimentInfo(
        "one-point",
        "Symmetrization lifts of the argument-shift generators in U(g).",
        "Fact 4 (lifting by symmetrization) and Theorem 1 at generator level, plus centralizer invariance",
        "Checks that the lifts commute exactly, that principal symbols recover the classical generators, and "
        "that the lifts commute with the Cartan subalgebra when mu lies in it.",
    )),
    "spectrum": (run_spectrum, ExperimentInfo(
        "spectrum",
        "Joint spectrum of a commuting family on a module or its singular subspace.",
        "Theorem 5 (simple spectrum for generic parameters) and Corollary 5, in sampled form",
        "family = quadratic (default), gt or one-point; subspace = full or singular (singular by default when "
        "mu = 0).  Simple iff min tuple gap / scale > tolerance.gap and residual / scale < tolerance.residual.",
    )),
    "scaling-limit": (run_scaling_limit, ExperimentInfo(
        "scaling-limit",
        "Spectra of H_i(s z) against (mu#)^(i) as s grows.",
        "Theorem 2 (the s -> infinity limit factorizes into one-point algebras)",
        "Reports sorted-spectrum distances on the grid (default 10..10^4) and the fitted log-log slope "
        "(expected -1).",
    )),
    "gt-limit": (run_gt_limit, ExperimentInfo(
        "gt-limit",
        "Argument-shift algebras along mu(t) converge to the Gelfand-Tsetlin algebra.",
        "Lemma 1 (the t -> 0 limit is the Gelfand-Tsetlin subalgebra) and the GT step of Theorem 5",
        "mu(t)# is the traceless part of diag(t^(r-1), ..., t, 1).  The gap is measured between the exactly "
        "generated operator algebras on V_lambda; the GT joint spectrum is also reported.",
    )),
    "verma-limit": (run_verma_limit, ExperimentInfo(
        "verma-limit",
        "Degeneration of the (n+1)-point family on [V (x) M*_{z mu}]^sing as z -> infinity.",
        "Theorem 6 (the limit of the singular subspace is V (x) 1 and the limit algebra contains A_mu(z_1..z_n))",
        "Reports dim of the mixed singular subspace, its gap to V (x) 1 in rescaled coordinates, and the "
        "spectrum distance of the restricted H_i to the n-point non-homogeneous hamiltonians; checks depth "
        "stability (D and D+1 give the same subspace).",
    )),
    "translation-check": (run_translation_check, ExperimentInfo(
        "translation-check",
        "Exact invariance of H_i under z -> z + b (and z -> a z + b when mu = 0).",
        "Propositions 3 and 4 (stability under affine transformations and translations)",
        "Compares the exact elements; for mu = 0 also checks H_i(a z + b) = H_i(z)/a.",
    )),
}


def describe(name: str) -> str:
    if name not in REGISTRY:
        raise KeyError(name)
    info = REGISTRY[name][1]
    return f"{info.name}: {info.summary}\n  tests: {info.tests}\n  {info.details}\n"
