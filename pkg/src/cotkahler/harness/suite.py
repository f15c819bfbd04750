"""The verification suite: sample admissible points, run every check, aggregate."""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import geometry as geo
from ..bundle import CotangentPoint, NaturalStructure
from ..errors import (ConfigError, DomainError, FiniteDifferenceError, InadmissiblePointError,
                      SingularParameterError)
from ..params import AdmissibilityReport, check_admissibility
from ..spaceform import metric_at, sampling_radius
from ..geometry.connection import generic_coeffs, literal_q, specialised_ps
from ..geometry.nijenhuis import full_from_blocks
from .config import VerificationConfig

__all__ = ["CheckSpec", "CHECKS", "CheckRecord", "ResidualRecord", "CheckReport",
           "sample_points", "evaluate_point", "run_suite", "scan_hsc", "HscScan"]


@dataclass(frozen=True)
class CheckSpec:
    name: str
    paper_ref: str
    tolerance: float
    bound: str = "upper"
    in_verdict: bool = True


CHECKS = [
    CheckSpec("almost-complex", "J^2 = -I", 1e-10),
    CheckSpec("hermitian", "G(JX, JY) = G(X, Y)", 1e-10),
    CheckSpec("metric-blocks", "G1 H1 = I, G2 H2 = I, symmetric blocks", 1e-10),
    CheckSpec("fundamental-form", "phi(dp_i, dq_j) = lambda delta + mu g0 p", 1e-11),
    CheckSpec("zero-fiber-scaling", "J1 = (A/lambda(0)) g, J2 = (lambda(0)/A) g^-1 at p = 0", 1e-12),
    CheckSpec("horizontal-energy", "delta/delta q^k t = 0, d/dp_k t = g^0k", 1e-8),
    CheckSpec("frame-brackets", "brackets of the adapted frame fields", 1e-8),
    CheckSpec("base-curvature-antisymmetry", "R^0_kij = -R^0_kji", 1e-12),
    CheckSpec("nijenhuis-closed-form", "N = 0 for the integrable b1", 1e-9),
    CheckSpec("nijenhuis-oracle", "N = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y] = 0", 1e-6),
    CheckSpec("kahler-dphi", "d phi = 0 iff mu = lambda'", 1e-7),
    CheckSpec("torsion", "nabla_X Y - nabla_Y X = [X, Y]", 1e-10),
    CheckSpec("metric-compatibility", "nabla G = 0", 1e-6),
    CheckSpec("complex-parallel", "nabla J = 0", 1e-6),
    CheckSpec("connection-closed-form", "space-form P, S equal the generic Koszul-derived P, S", 1e-9),
    CheckSpec("connection-koszul", "Levi-Civita coefficients vs Koszul formula", 1e-6),
    CheckSpec("eq28-literal-match", "literal space-form Q vs generic Q", 1e-9, in_verdict=False),
    CheckSpec("curvature-oracle", "closed-form K vs [nabla, nabla] - nabla_[,]", 1e-5),
    CheckSpec("curvature-symmetry", "G(K(X,Y)Z, W) = -G(K(X,Y)W, Z)", 1e-9),
    CheckSpec("einstein", "Ric = (cn/A) G", 1e-9),
    CheckSpec("local-symmetry", "nabla K = 0", 1e-5),
    CheckSpec("hsc-nonconstancy", "holomorphic sectional curvature is not constant", 1e-3, bound="lower"),
]


@dataclass(frozen=True)
class ResidualRecord:
    index: int
    x: tuple
    p: tuple
    t: float
    check: str
    residual: float


@dataclass
class CheckRecord:
    name: str
    paper_ref: str
    points: int
    max_residual: float
    tolerance: float
    passed: bool
    bound: str = "upper"
    in_verdict: bool = True
    note: str | None = None


@dataclass
class CheckReport:
    config: dict
    checks: list[CheckRecord]
    residuals: list[ResidualRecord]
    admissibility: AdmissibilityReport | None
    runtime_ms: float | None = None
    aborted: str | None = None
    einstein_constant: float | None = None
    timings_ms: dict = field(default_factory=dict)

    @property
    def overall_pass(self) -> bool:
        if self.aborted:
            return False
        return all(r.passed for r in self.checks if r.in_verdict)


def _rel(a, ref) -> float:
    a, ref = np.asarray(a), np.asarray(ref)
    return float(np.max(np.abs(a - ref)) / max(1.0, float(np.max(np.abs(ref)))))


def _maxabs(a) -> float:
    return float(np.max(np.abs(a)))


def sample_points(cfg: VerificationConfig, structure: NaturalStructure | None = None) -> list[CotangentPoint]:
    """Deterministic admissible samples.

    x is uniform in the sampling ball; p has g-norm sqrt(2t) with t uniform on
    [0.05 t_max, t_max] and a uniformly random direction.
    """
    structure = structure or cfg.structure()
    rng = np.random.default_rng(cfg.seed)
    n, radius = cfg.n, sampling_radius(cfg.c)
    out, tries = [], 0
    while len(out) < cfg.points:
        tries += 1
        if tries > 100 * cfg.points:
            raise ConfigError(f"only {len(out)} of {cfg.points} sampled points are admissible")
        d = rng.normal(size=n)
        x = radius * rng.uniform() ** (1.0 / n) * d / np.linalg.norm(d)
        t = rng.uniform(0.05 * cfg.t_max, cfg.t_max)
        u = rng.normal(size=n)
        u /= np.linalg.norm(u)
        ms = metric_at(structure.chart, x)
        # |p|_g^2 = p g^-1 p ; g^-1 = sigma^2 I on this chart
        p = math.sqrt(2 * t) * u / math.sqrt(ms.g_inv[0, 0])
        pt = CotangentPoint(x, p)
        try:
            structure.at(pt)
        except (InadmissiblePointError, SingularParameterError, DomainError):
            continue
        out.append(pt)
    return out


def _hsc_directions(seed: int, index: int, count: int, dim: int) -> np.ndarray:
    rng = np.random.default_rng([seed, index, 0x45C])
    return rng.normal(size=(count, dim))


def hsc_values(structure: NaturalStructure, pt: CotangentPoint, directions: np.ndarray) -> np.ndarray:
    bp = structure.at(pt)
    return np.array([geo.holomorphic_sectional_curvature(structure, bp, X) for X in directions])


def evaluate_point(structure: NaturalStructure, pt: CotangentPoint, *, h=None, directions=100,
                   seed=0, index=0) -> tuple[dict[str, float], dict[str, str]]:
    """Residual of every check at one point; failures become ``inf`` with a cause."""
    res: dict[str, float] = {}
    causes: dict[str, str] = {}
    bp = structure.at(pt)
    n = structure.n
    J, G, st = bp.J, bp.G, bp.st
    eye2 = np.eye(2 * n)

    def run(name, fn):
        try:
            res[name] = float(fn())
        except (FiniteDifferenceError, InadmissiblePointError, SingularParameterError,
                DomainError, np.linalg.LinAlgError) as exc:
            res[name] = math.inf
            causes[name] = f"{type(exc).__name__}: {exc}"

    run("almost-complex", lambda: _maxabs(J @ J + eye2))
    run("hermitian", lambda: _maxabs(J.T @ G @ J - G))

    def blocks():
        eye = np.eye(n)
        asym = max(_maxabs(m - m.T) for m in (st.J1, st.J2, st.G1, st.G2, st.H1, st.H2))
        return max(_maxabs(st.G1 @ st.H1 - eye), _maxabs(st.G2 @ st.H2 - eye), asym)

    run("metric-blocks", blocks)

    def fundamental():
        phi = geo.phi_frame(bp)
        off = max(_maxabs(phi[:n, :n]), _maxabs(phi[n:, n:]))
        return max(_rel(phi[n:, :n], st.phi), _rel(-phi[:n, n:].T, st.phi), off)

    run("fundamental-form", fundamental)

    def zero_fiber():
        b0 = structure.at(CotangentPoint(pt.x, np.zeros(n)))
        lam0 = b0.coeffs.lambda_
        return max(_maxabs(b0.st.J1 - structure.A / lam0 * b0.ms.g),
                   _maxabs(b0.st.J2 - lam0 / structure.A * b0.ms.g_inv))

    run("zero-fiber-scaling", zero_fiber)
    run("horizontal-energy", lambda: geo.horizontal_energy_residual(structure, bp, h))
    run("frame-brackets", lambda: _maxabs(geo.bracket_oracle(structure, bp, h) - geo.structure_constants(bp)))

    def antisym():
        R0 = geo.base_curvature_contracted(bp)
        return _maxabs(R0 + np.einsum("kij->kji", R0))

    run("base-curvature-antisymmetry", antisym)
    run("nijenhuis-closed-form", lambda: geo.nijenhuis_closed_form(structure, pt).max_abs())
    run("nijenhuis-oracle", lambda: _maxabs(geo.nijenhuis_full_oracle(structure, pt, h)))
    run("kahler-dphi", lambda: geo.dphi_residual(structure, pt, h))
    run("torsion", lambda: geo.torsion_residual(structure, pt))

    parallel = {}

    def par(i):
        if "v" not in parallel:
            parallel["v"] = geo.parallel_residuals(structure, pt, h)
        return parallel["v"][i]

    run("metric-compatibility", lambda: par(0))
    run("complex-parallel", lambda: par(1))

    gen = generic_coeffs(structure, bp)

    def closed_conn():
        P, S = specialised_ps(structure, bp)
        return max(_rel(P, gen.P), _rel(S, gen.S))

    run("connection-closed-form", closed_conn)
    run("connection-koszul",
        lambda: _rel(geo.frame_connection(structure, bp), geo.koszul_oracle(structure, pt, h)))
    run("eq28-literal-match", lambda: _rel(literal_q(structure, bp), gen.Q))

    K = geo.curvature_full(structure, bp)

    def curv_oracle():
        ref = geo.curvature_oracle_full(structure, pt, h)
        scale = float(np.max(np.abs(ref)))
        diff = float(np.max(np.abs(K - ref)))
        return diff / scale if scale > 0 else diff

    run("curvature-oracle", curv_oracle)
    run("curvature-symmetry", lambda: geo.curvature_symmetry_residual(structure, bp))
    run("einstein", lambda: geo.einstein_residual(structure, bp))
    run("local-symmetry", lambda: geo.nabla_K_residual(structure, pt, h))

    def hsc():
        if structure.c == 0:
            return 0.0
        H = hsc_values(structure, pt, _hsc_directions(seed, index, directions, 2 * n))
        return (H.max() - H.min()) / np.max(np.abs(H))

    run("hsc-nonconstancy", hsc)
    return res, causes


def _aggregate(spec: CheckSpec, values: list[float], causes: list[str], tol: float, flat: bool,
               include_literal: bool) -> CheckRecord:
    in_verdict = spec.in_verdict or (spec.name == "eq28-literal-match" and include_literal)
    note = next((c for c in causes if c), None)
    if spec.bound == "lower":
        if flat:
            return CheckRecord(spec.name, spec.paper_ref, len(values), 0.0, tol, True, "lower",
                               in_verdict, "not applicable (flat)")
        worst = min(values)
        return CheckRecord(spec.name, spec.paper_ref, len(values), worst, tol,
                           bool(math.isfinite(worst) and worst > tol), "lower", in_verdict, note)
    worst = max(values)
    return CheckRecord(spec.name, spec.paper_ref, len(values), worst, tol,
                       bool(math.isfinite(worst) and worst <= tol), "upper", in_verdict, note)


def run_suite(cfg: VerificationConfig, *, timings: bool = False) -> CheckReport:
    """Run every check at ``cfg.points`` sampled admissible points."""
    start = time.perf_counter()
    structure = cfg.structure()
    adm = check_admissibility(structure.family, cfg.c, cfg.t_max, cfg.admissibility_samples)
    if not adm.passed:
        first = adm.first_failure()
        return CheckReport(config=cfg.echo(), checks=[], residuals=[], admissibility=adm,
                           aborted=f"admissibility failure: {first.name} fails at t = {first.first_failure_t!r}",
                           runtime_ms=(time.perf_counter() - start) * 1e3 if timings else None)

    points = sample_points(cfg, structure)

    def work(item):
        i, pt = item
        return evaluate_point(structure, pt, h=cfg.h, directions=cfg.directions, seed=cfg.seed, index=i)

    items = list(enumerate(points))
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(work, items))
    else:
        results = [work(item) for item in items]

    residuals = []
    for (i, pt), (res, _) in zip(items, results):
        t = 0.5 * float(pt.p @ metric_at(structure.chart, pt.x).g_inv @ pt.p)
        for spec in CHECKS:
            residuals.append(ResidualRecord(i, tuple(pt.x.tolist()), tuple(pt.p.tolist()), t,
                                            spec.name, res[spec.name]))

    checks = []
    for spec in CHECKS:
        tol = cfg.tolerances.get(spec.name, spec.tolerance)
        vals = [res[spec.name] for res, _ in results]
        causes = [c.get(spec.name, "") for _, c in results]
        checks.append(_aggregate(spec, vals, causes, tol, cfg.c == 0, cfg.include_eq28_literal))

    return CheckReport(
        config=cfg.echo(),
        checks=checks,
        residuals=residuals,
        admissibility=adm,
        runtime_ms=(time.perf_counter() - start) * 1e3 if timings else None,
        einstein_constant=cfg.c * cfg.n / cfg.A,
    )


@dataclass
class HscScan:
    rows: list[dict]
    minimum: float
    maximum: float
    spread: float
    relative_spread: float


def scan_hsc(cfg: VerificationConfig, directions: int | None = None) -> HscScan:
    """Holomorphic sectional curvature along random directions at every sample point."""
    directions = directions or cfg.directions
    structure = cfg.structure()
    rows = []
    for i, pt in enumerate(sample_points(cfg, structure)):
        dirs = _hsc_directions(cfg.seed, i, directions, 2 * cfg.n)
        H = hsc_values(structure, pt, dirs)
        bp = structure.at(pt)
        for j, (X, value) in enumerate(zip(dirs, H)):
            rows.append({"point": i, "x": pt.x.tolist(), "p": pt.p.tolist(), "t": bp.t,
                         "direction": j, "X": X.tolist(), "H": float(value)})
    values = np.array([r["H"] for r in rows])
    lo, hi = float(values.min()), float(values.max())
    scale = float(np.max(np.abs(values)))
    return HscScan(rows, lo, hi, hi - lo, (hi - lo) / scale if scale > 0 else 0.0)
