"""Regression harness: every module invariant at its grid defaults.

Each check yields a Check(name, delta, tol, passed).  ``run_all`` is what
``hardycs verify`` executes.
"""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import compop, hardy, moebius, obstruction, spectral
from .hardy import HardyElement
from .moebius import OMEGA, Kind
from .obstruction import Check, VerdictKind
from .series import (
    DEFAULT_DEPTH,
    Polynomial,
    RationalMap,
    TruncatedSeries,
    choose_depth,
    ps_compose,
    ps_mul,
    rat_compose,
    rat_to_series,
    tail_bound,
)

GRID_MODULI = tuple(round(0.1 * k, 10) for k in range(1, 9))
GRID_PHASES = 8


def default_grid(moduli: Sequence[float] = GRID_MODULI, phases: int = GRID_PHASES) -> List[complex]:
    return [r * cmath.exp(2j * math.pi * p / phases) for r in moduli for p in range(phases)]


def random_rational(rng: np.random.Generator, min_pole: float = 1.2, max_pole: float = 3.0) -> RationalMap:
    """Unit-norm rational map: numerator of degree <= 2, one or two simple poles."""
    num = rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3)
    den = Polynomial([1.0])
    for _ in range(int(rng.integers(1, 3))):
        p = rng.uniform(min_pole, max_pole) * cmath.exp(2j * math.pi * rng.uniform())
        den = den * Polynomial([1.0, -1.0 / p])
    F = RationalMap(Polynomial(num), den)
    return F * (1.0 / rat_to_series(F, 1024).norm())


# ---------------------------------------------------------------- per-module


def series_checks() -> List[Check]:
    out = []
    pa = moebius.involution(0.5).map
    s = rat_to_series(pa, 4).coeffs
    out.append(Check.within("series.phi_half_expansion", float(np.max(np.abs(s - [0.5, -0.75, -0.375, -0.1875]))), 1e-15))
    ident = rat_compose(pa, pa)
    out.append(Check.within("series.involution_composes_to_identity", 0.0 if ident.allclose(RationalMap.identity(), 1e-12) else math.inf, 1e-12))
    # composition vs truncated series composition, inner maps vanishing at 0
    rng = np.random.default_rng(7)
    worst = 0.0
    N = 64
    for _ in range(10):
        F = random_rational(rng)
        b = 0.6 * cmath.exp(2j * math.pi * rng.uniform())
        G = moebius.involution(b).map - b  # vanishes at 0, pole at 1/conj(b)
        lhs = rat_to_series(rat_compose(F, G), N)
        rhs = ps_compose(rat_to_series(F, N), rat_to_series(G, N))
        worst = max(worst, float(np.max(np.abs(lhs.coeffs - rhs.coeffs))))
    out.append(Check.within("series.compose_matches_series_composition", worst, 1e-12))
    f = rat_to_series(random_rational(rng), N)
    g = rat_to_series(random_rational(rng), N)
    h = rat_to_series(random_rational(rng), N)
    comm = np.max(np.abs(ps_mul(f, g).coeffs - ps_mul(g, f).coeffs))
    dist = np.max(np.abs(ps_mul(f, g + h).coeffs - (ps_mul(f, g) + ps_mul(f, h)).coeffs))
    out.append(Check.within("series.ps_mul_commutes_distributes", float(max(comm, dist)), 1e-13))
    return out


def moebius_checks(grid: Sequence[complex]) -> List[Check]:
    out = []
    worst_fp = worst_mult = 0.0
    bad_kind = 0
    for a in grid:
        for w in (OMEGA, OMEGA.conjugate(), 1j, cmath.exp(1j)):
            c = moebius.classify(moebius.build_elliptic(a, w))
            if c.kind is not Kind.ELLIPTIC:
                bad_kind += 1
                continue
            worst_fp = max(worst_fp, abs(c.fixed_point_in_disk - a))
            worst_mult = max(worst_mult, abs(c.multiplier - w))
    out.append(Check.within("moebius.classify_build_elliptic_kind", float(bad_kind), 0))
    out.append(Check.within("moebius.classify_fixed_point", worst_fp, 1e-10))
    out.append(Check.within("moebius.classify_multiplier", worst_mult, 1e-10))
    worst_iter = 0.0
    premature = 0
    for a in grid[:: max(1, len(grid) // 8)]:
        for q, w in ((2, -1.0), (3, OMEGA), (4, 1j), (6, cmath.exp(1j * math.pi / 3))):
            phi = moebius.build_elliptic(a, w)
            it = moebius.identity()
            for n in range(1, q + 1):
                it = phi @ it
                if n < q and it.is_identity(1e-9):
                    premature += 1
            worst_iter = max(worst_iter, float(np.max(np.abs(it.matrix - np.eye(2)))))
    out.append(Check.within("moebius.qth_iterate_is_identity", worst_iter, 1e-10))
    out.append(Check.within("moebius.no_smaller_iterate_is_identity", float(premature), 0))
    orders = [moebius.elliptic_order(moebius.EllipticData(0.5, w, 0)) for w in (OMEGA, 1j, cmath.exp(1j))]
    out.append(Check.within("moebius.orders_3_4_inf", 0.0 if orders == [3, 4, math.inf] else math.inf, 0))
    return out


def hardy_checks(depth: int = DEFAULT_DEPTH, seed: int = 0) -> List[Check]:
    out = []
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        F = random_rational(rng)
        w = 0.6 * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
        d = choose_depth(lambda n: tail_bound(F, n), depth, 1e-13)
        f = HardyElement.from_rational(F, d)
        worst = max(worst, abs(hardy.inner_product(f, hardy.kernel(w, d)) - F(w)))
    out.append(Check.within("hardy.reproducing_property", worst, 1e-10))
    # the quadrature sees sum f_n conj(g_n) r^(2n): check that exactly, and the
    # r -> 1 bias against its a-priori bound
    quad = bias = 0.0
    r = 0.999
    n = np.arange(1024)
    for _ in range(50):
        F, G = random_rational(rng), random_rational(rng)
        fc, gc = rat_to_series(F, 1024).coeffs, rat_to_series(G, 1024).coeffs
        q = hardy.boundary_inner_product(F, G, 4096, r)
        quad = max(quad, abs(q - np.sum(fc * np.conj(gc) * r ** (2 * n))))
        bound = np.sum(np.abs(fc) * np.abs(gc) * (1 - r ** (2 * n)))
        bias = max(bias, abs(np.vdot(gc, fc) - q) - bound)
    out.append(Check.within("hardy.quadrature_matches_radius_weighted_pairing", quad, 1e-12))
    out.append(Check.within("hardy.quadrature_bias_within_bound", max(bias, 0.0), 1e-12))
    a = 0.5
    g = obstruction.g_map(a)
    worst = 0.0
    M = 512
    gs = rat_to_series(g, M)
    pows = [TruncatedSeries.one(M)]
    for _ in range(4):
        pows.append(ps_mul(pows[-1], gs))
    for m in range(5):
        for n in range(5):
            worst = max(worst, abs(hardy.inner_moment(g, m, n) - hardy.inner_product(pows[m], pows[n])))
    out.append(Check.within("hardy.inner_moment_vs_series", worst, 1e-8))
    return out


@dataclass(frozen=True)
class PointResult:
    a: complex
    checks: Tuple[Check, ...]
    compression_adjoint: float


def spectral_point(a: complex, depth: int = DEFAULT_DEPTH, count: int = spectral.DEFAULT_COUNT) -> PointResult:
    """Eigen-residuals, e-family invariants and span conditioning at one a."""
    M = spectral.working_depth(a, 3 * count, depth)
    out = []
    fw = ad = 0.0
    comp = 0.0
    for w in (OMEGA,):
        T = compop.truncate(moebius.build_elliptic(a, w), M)
        for m in range(3):
            fb = spectral.lambda_basis(a, w, m, count, depth, T)
            ab = spectral.lambda_star_basis(a, w, m, count, depth, T)
            fw = max(fw, fb.max_residual())
            ad = max(ad, ab.max_residual())
            for v in ab.vectors:
                comp = max(comp, compop.adjoint_residual(T, v, ab.eigenvalue, depth, compression=True))
    out.append(Check.within("spectral.forward_eigen_residual", fw, spectral.FORWARD_TOL))
    out.append(Check.within("spectral.adjoint_eigen_residual", ad, spectral.ADJOINT_TOL))
    fam = spectral.e_family(a, 11, depth)
    out.append(Check.within("spectral.e_family_orthogonal", fam.orthogonality_error(), 1e-10))
    out.append(Check.within("spectral.e_family_norms", fam.norm_error(), 1e-10))
    cond = spectral.span_condition(a, count, M)
    out.append(Check.within("spectral.span_condition", cond, spectral.RANK_COND_MAX))
    # finite-depth shadow of C_{phi_a}^2 = I
    P = compop.truncate(moebius.involution(a), M).entries
    E = np.eye(M, 21, dtype=complex)
    shadow = float(np.max(np.abs((P @ (P @ E))[:depth] - E[:depth])))
    out.append(Check.within("compop.involution_square_shadow", shadow, 1e-8))
    phi = moebius.build_elliptic(a, OMEGA)
    b = abs(phi(0.0))
    bound = math.sqrt((1 + b) / (1 - b)) + 0.01
    nrm = compop.operator_norm(compop.truncate(phi, depth))
    out.append(Check.within("compop.norm_bound", max(0.0, nrm - bound), 0.0))
    return PointResult(complex(a), tuple(out), comp)


def obstruction_point(
    a: complex, depth: int = DEFAULT_DEPTH, constants_fn: obstruction.ConstantsFn = obstruction.constants, seed: int = 0
) -> PointResult:
    r = obstruction.run(a, depth, constants_fn=constants_fn)
    out = [replace(c, name="obstruction." + c.name) for c in r.checks]
    rng = np.random.default_rng(seed)
    c0 = r.constants.c0_abs
    base = obstruction.gap_via_h1(a, c0, r.working_depth)
    worst = max(
        abs(obstruction.gap_via_h1(a, c0 * cmath.exp(1j * t), r.working_depth) - base)
        for t in rng.uniform(0, 2 * math.pi, 16)
    )
    out.append(Check.within("obstruction.gap_phase_invariant", worst, 1e-12))
    return PointResult(complex(a), tuple(out), 0.0)


def verdict_checks() -> List[Check]:
    cases = [
        (moebius.rotation(cmath.exp(1j * math.pi / 7)), VerdictKind.ROTATION),
        (moebius.involution(0.5), VerdictKind.ORDER_TWO),
        (moebius.MoebiusMap.from_coeffs([0.5, 1.0], [1.0, 0.5]), VerdictKind.NO_INTERIOR_FIXED_POINT),
        (moebius.build_elliptic(0.5, OMEGA), VerdictKind.ELLIPTIC_ORDER_THREE),
    ]
    wrong = sum(obstruction.verdict(phi).kind is not kind for phi, kind in cases)
    out = [Check.within("obstruction.verdict_table", float(wrong), 0)]
    pa = moebius.involution(0.5)
    bad = 0
    for k in range(21):
        zk = RationalMap.monomial(k)
        if not compop.apply_exact(pa, compop.apply_exact(pa, zk)).allclose(zk, 1e-10):
            bad += 1
    out.append(Check.within("compop.involution_square_exact", float(bad), 0))
    return out


# ---------------------------------------------------------------- driver


def _map(fn: Callable, items: Sequence, jobs: int):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _merge(prefix_results: Iterable[PointResult]) -> List[Check]:
    """Collapse per-point checks to one check per name (worst delta wins)."""
    merged = {}
    for pr in prefix_results:
        for c in pr.checks:
            name = c.name.split("[")[0]
            prev = merged.get(name)
            if prev is None or (not c.passed and prev.passed) or (c.passed == prev.passed and c.delta > prev.delta):
                merged[name] = replace(c, name=name)
    return list(merged.values())


@dataclass
class VerifyResult:
    checks: List[Check]
    info: List[str]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)


def run_all(
    depth: int = DEFAULT_DEPTH,
    grid: Optional[Sequence[complex]] = None,
    jobs: int = 1,
    mutate_rho: bool = False,
) -> VerifyResult:
    grid = list(default_grid() if grid is None else grid)
    checks: List[Check] = []
    info: List[str] = []
    checks += series_checks()
    checks += moebius_checks(grid)
    checks += hardy_checks(depth)
    checks += verdict_checks()

    spec_pts = _map(partial(spectral_point, depth=depth), grid, jobs)
    checks += _merge(spec_pts)
    worst_comp = max(p.compression_adjoint for p in spec_pts)
    flag = "widened" if worst_comp > spectral.ADJOINT_TOL else "within tolerance"
    info.append(f"square {depth}x{depth} adjoint compression residual: {worst_comp:.3e} ({flag})")

    cfn = _mutated_constants if mutate_rho else obstruction.constants
    obs_pts = _map(partial(obstruction_point, depth=depth, constants_fn=cfn), grid, jobs)
    checks += _merge(obs_pts)
    return VerifyResult(checks, info)


def _mutated_constants(a: complex) -> obstruction.ObstructionConstants:
    k = obstruction.constants(a)
    return replace(k, rho=k.rho * (1 + 1e-3))
