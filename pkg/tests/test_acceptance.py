"""Acceptance criteria, each at its stated tolerance.

Every test prints one line ``CRITERION n PASS|FAIL: ...``; the lines are
also collected into the pytest terminal summary.  Run directly with
``python3 tests/test_acceptance.py`` for the lines alone.

Criteria 4 and 6 contain one clause each that cannot hold (see the
README); they are run as stated and fail.
"""
import cmath
import math
import sys
import time
from dataclasses import dataclass, field
from typing import List

import numpy as np

from hardycs import compop, hardy, moebius, obstruction as ob, spectral
from hardycs.hardy import HardyElement, inner_product, kernel
from hardycs.moebius import OMEGA
from hardycs.obstruction import VerdictKind
from hardycs.series import RationalMap, choose_depth, rat_to_series, tail_bound
from hardycs.verify import default_grid, random_rational

GRID = default_grid()  # |a| in {0.1, ..., 0.8} x 8 phases
DEPTH = 256
RESULTS: List[str] = []


@dataclass
class Clauses:
    n: int
    title: str
    parts: List[tuple] = field(default_factory=list)

    def add(self, name: str, worst: float, tol: float, ok: bool = None):
        self.parts.append((name, worst, tol, (worst <= tol) if ok is None else ok))

    @property
    def ok(self) -> bool:
        return all(p[3] for p in self.parts)

    def emit(self) -> str:
        bits = "; ".join(f"{n} {'ok' if k else 'FAILED'} ({w:.2e} vs {t:.0e})" for n, w, t, k in self.parts)
        line = f"CRITERION {self.n} {'PASS' if self.ok else 'FAIL'}: {self.title}: {bits}"
        RESULTS.append(line)
        print(line)
        return line


def test_criterion_1_obstruction_identity():
    c = Clauses(1, "norm identity and gap on 64 points")
    t = time.perf_counter()
    route = gap_err = 0.0
    positive = True
    for a in GRID:
        n = ob.f_norms(a, ob.pipeline_depth(a, DEPTH))
        closed = ob.f_norm2_closed(a)
        for v in (n.actual, n.actual_closed, n.actual_moment):
            route = max(route, abs(v - closed) / closed)
        gap_err = max(gap_err, abs(n.gap - ob.gap_closed(a)) / ob.gap_closed(a))
        positive &= n.gap > 0
    elapsed = time.perf_counter() - t
    c.add("three routes vs closed form", route, 1e-8)
    c.add("gap vs closed form", gap_err, 1e-10)
    c.add("gap > 0", 0.0 if positive else math.inf, 0.0)
    c.add("runtime s", elapsed, 60.0)
    c.emit()
    assert c.ok


def test_criterion_2_c_sequence_and_h0_norm():
    c = Clauses(2, "c_j recurrence, ||h0||^2, |c0| recovery")
    rec = nrm = c0e = 0.0
    for a in GRID:
        k = ob.constants(a)
        A = abs(a) ** 2
        solved = ob.solve_c_recurrence(a, k.c0_abs, ob.SEQ_LEN)
        closed = k.c0_abs * k.rho_tilde * k.rho ** np.arange(ob.SEQ_LEN)
        rec = max(rec, float(np.max(np.abs(solved - closed))))
        M = ob.pipeline_depth(a, DEPTH)
        nrm = max(nrm, abs(ob.h0(a, M).norm2() - 1 / (1 - A)))
        unit = ob.h0(a, M, 1.0).norm2()
        c0e = max(c0e, abs(math.sqrt((1 / (1 - A)) / unit) - 1 / (1 - A**2)))
    c.add("c_j vs c0 rho~ rho^(j-1)", rec, 1e-9)
    c.add("||h0||^2 = 1/(1-|a|^2)", nrm, 1e-9)
    c.add("|c0| = 1/(1-|a|^4)", c0e, 1e-10)
    c.emit()
    assert c.ok


def test_criterion_3_moments():
    c = Clauses(3, "<h0, phi_a^(3k)> = c0 (1-|a|^4) rho^k, k <= 8")
    worst = max(ob.h0_moments(a, 8, ob.pipeline_depth(a, DEPTH)).max_delta for a in GRID)
    c.add("moments", worst, 1e-9)
    c.emit()
    assert c.ok


def test_criterion_4_h1_sequences_and_isometry():
    c = Clauses(4, "delta_k, h1 orthogonal to Lambda_0, ||h1 - conj(a) h0||^2")
    d = orth = iso = 0.0
    worst_at = None
    for a in GRID:
        d = max(d, float(np.max(np.abs(ob.delta_closed(a, 16) - ob.delta_recurrence(a, 16)))))
        M = ob.pipeline_depth(a, DEPTH)
        h1 = ob.h1(a, M)
        for k in range(6):
            orth = max(orth, abs(inner_product(h1, spectral.phi_a_power(a, 3 * k, M))))
        A = abs(a) ** 2
        part = ob.h1_part(a, M).element.norm2()
        err = abs(part - (1 + A) / (1 - A))
        if err > iso:
            iso, worst_at = err, (a, part, (1 + A) / (1 - A))
    c.add("delta closed vs recurrence", d, 1e-10)
    c.add("<h1, phi_a^(3k)> = 0", orth, 1e-9)
    c.add("||h1 - conj(a) h0||^2 = (1+|a|^2)/(1-|a|^2)", iso, 1e-8)
    line = c.emit()
    a, got, want = worst_at
    print(f"    worst isometry clause at a = {a:.4g}: {got:.10g} vs {want:.10g}")
    assert c.ok, line


def test_criterion_5_eigenstructure():
    c = Clauses(5, "Lambda_m / Lambda_m* residuals and e-family")
    fw = ad = fam = 0.0
    for a in GRID:
        M = spectral.working_depth(a, 3 * 5 + 2, DEPTH)
        T = compop.truncate(moebius.build_elliptic(a, OMEGA), M)
        for m in range(3):
            fw = max(fw, spectral.lambda_basis(a, OMEGA, m, 6, DEPTH, T).max_residual())
            ad = max(ad, spectral.lambda_star_basis(a, OMEGA, m, 6, DEPTH, T).max_residual())
        f = spectral.e_family(a, 11, DEPTH)
        fam = max(fam, f.norm_error(), f.orthogonality_error())
    c.add("forward residual", fw, 1e-8)
    c.add("adjoint residual", ad, 1e-6)
    c.add("e-family norms/orthogonality", fam, 1e-10)
    c.emit()
    assert c.ok


def test_criterion_6_oracles():
    c = Clauses(6, "pairing vs quadrature, reproducing property")
    rng = np.random.default_rng(2024)
    quad = 0.0
    over = 0
    for _ in range(50):
        F, G = random_rational(rng), random_rational(rng)
        d = choose_depth(lambda n: max(tail_bound(F, n), tail_bound(G, n)), DEPTH, 1e-14)
        pair = np.vdot(rat_to_series(G, d).coeffs, rat_to_series(F, d).coeffs)
        err = abs(pair - hardy.boundary_inner_product(F, G, 4096, 0.999))
        quad = max(quad, err)
        over += err > 1e-3
    rep = 0.0
    for _ in range(100):
        F = random_rational(rng)
        w = 0.6 * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
        d = choose_depth(lambda n: tail_bound(F, n), DEPTH, 1e-13)
        rep = max(rep, abs(inner_product(HardyElement.from_rational(F, d), kernel(w, d)) - F(w)))
    c.add("pairing vs quadrature r=0.999", quad, 1e-3)
    c.add("reproducing property", rep, 1e-10)
    line = c.emit()
    print(f"    quadrature clause exceeded on {over}/50 pairs")
    assert c.ok, line


def test_criterion_7_verdict_table():
    c = Clauses(7, "verdict table and C_{phi_a}^2 = I on z^k")
    cases = [
        (moebius.rotation(cmath.exp(1j * math.pi / 7)), VerdictKind.ROTATION),
        (moebius.involution(0.5), VerdictKind.ORDER_TWO),
        (moebius.MoebiusMap.from_coeffs([0.5, 1.0], [1.0, 0.5]), VerdictKind.NO_INTERIOR_FIXED_POINT),
        (moebius.build_elliptic(0.5, OMEGA), VerdictKind.ELLIPTIC_ORDER_THREE),
    ]
    wrong = sum(ob.verdict(phi).kind is not want for phi, want in cases)
    c.add("misclassified canonical inputs", float(wrong), 0.0)
    pa = moebius.involution(0.5)
    worst = 0.0
    for k in range(21):
        zk = RationalMap.monomial(k)
        r = compop.apply_exact(pa, compop.apply_exact(pa, zk))
        num = np.zeros(max(r.num.coeffs.size, k + 1), complex)
        num[: r.num.coeffs.size] = r.num.coeffs
        worst = max(worst, float(np.max(np.abs(num[: k + 1] - zk.num.coeffs))), float(np.max(np.abs(num[k + 1 :]), initial=0)))
        worst = max(worst, float(np.max(np.abs(r.den.coeffs[1:]), initial=0)))
    c.add("C_{phi_a}^2 z^k - z^k, k <= 20", worst, 1e-12)
    c.emit()
    assert c.ok


def test_criterion_8_phase_robustness():
    c = Clauses(8, "gap invariant under the phase of c0")
    rng = np.random.default_rng(8)
    worst = 0.0
    for a in GRID:
        c0 = ob.constants(a).c0_abs
        M = ob.pipeline_depth(a, DEPTH)
        base = ob.gap_via_h1(a, c0, M)
        for t in rng.uniform(0, 2 * math.pi, 16):
            worst = max(worst, abs(ob.gap_via_h1(a, c0 * cmath.exp(1j * t), M) - base))
    c.add("max gap change over 16 phases", worst, 1e-12, worst < 1e-12)
    c.emit()
    assert c.ok


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
