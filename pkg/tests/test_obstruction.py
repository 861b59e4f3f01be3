import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from conftest import disk_points
from hardycs import moebius, obstruction as ob
from hardycs.errors import FixedPointAtOrigin, NotInDisk
from hardycs.moebius import OMEGA
from hardycs.obstruction import VerdictKind
from hardycs.verify import default_grid


def boundary_norm2(F):
    # independent oracle: (1/2pi) int |F(e^{it})|^2 dt by adaptive quadrature
    val, _ = quad(lambda t: abs(F(cmath.exp(1j * t))) ** 2, 0, 2 * math.pi, limit=400, epsabs=1e-13, epsrel=1e-13)
    return val / (2 * math.pi)


def test_constants_examples():
    k = ob.constants(0.5)
    assert abs(k.rho + 0.4) < 1e-15 and abs(k.rho_tilde + 0.525) < 1e-15
    assert abs(k.c0_abs - 16 / 15) < 1e-15
    k = ob.constants(1e-6)
    assert abs(k.rho) < 1e-5 and abs(k.c0_abs - 1) < 1e-10


def test_constants_imaginary_a():
    a = 0.5j
    k = ob.constants(a)
    # |conj(a)^2 / a| = |a|, so |rho| = |a| (1-|a|^2)/(1-|a|^4) = 0.4, as for a = 0.5
    assert abs(abs(k.rho) - 0.4) < 1e-15
    expected = math.pi + 2 * cmath.phase(a.conjugate()) - cmath.phase(a)
    assert abs(cmath.exp(1j * cmath.phase(k.rho)) - cmath.exp(1j * expected)) < 1e-12


@pytest.mark.xfail(strict=True, reason="modulus formula with |a|^2 in place of |a| gives 0.2; the constant has modulus 0.4")
def test_constants_imaginary_a_modulus_two_tenths():
    assert abs(abs(ob.constants(0.5j).rho) - 0.2) < 1e-15


def test_constants_rejects_origin_and_boundary():
    with pytest.raises(FixedPointAtOrigin, match="rotation case: no obstruction defined"):
        ob.constants(0)
    with pytest.raises(NotInDisk):
        ob.constants(1.0)


def test_c_recurrence_examples():
    np.testing.assert_allclose(ob.solve_c_recurrence(0.5, 1.0, 3), [-0.525, 0.21, -0.084], atol=1e-14)
    assert not np.any(ob.solve_c_recurrence(0.3 + 0.1j, 0.0, 5))
    assert abs(ob.solve_c_recurrence(0.5, 16 / 15, 1)[0] + 0.56) < 1e-14


@given(disk_points(0.05, 0.85))
def test_c_recurrence_matches_closed_form(a):
    k = ob.constants(a)
    c = ob.solve_c_recurrence(a, k.c0_abs, 8)
    closed = k.c0_abs * k.rho_tilde * k.rho ** np.arange(8)
    np.testing.assert_allclose(c, closed, rtol=1e-9, atol=1e-300)


def test_h0_examples():
    h = ob.h0(0.5, 256)
    assert abs(h.coeffs[0] - 1) < 1e-10
    assert abs(h.norm2() - 4 / 3) < 1e-10
    assert abs(h.norm2() - (16 / 15) ** 2 * 0.75 * 1.5625) < 1e-10
    m = ob.h0_moments(0.5, 2)
    np.testing.assert_allclose(m.closed, [1, -0.4, 0.16], atol=1e-14)
    assert m.max_delta < 1e-9


def test_h0_norm_by_quadrature():
    assert abs(boundary_norm2(ob.h0_map(0.5)) - 4 / 3) < 1e-10


def test_delta_and_b_examples():
    np.testing.assert_allclose(ob.delta_closed(0.5, 2)[:3], [1, -0.925, 0.58], atol=1e-15)
    assert abs(ob.b_closed(0.5, 16 / 15, 0)[0] + 1.12) < 1e-14
    np.testing.assert_allclose(ob.delta_closed(0.5, 16), ob.delta_recurrence(0.5, 16), atol=1e-12)


@given(disk_points(0.05, 0.85))
def test_b_system_matches_closed_form(a):
    c0 = ob.constants(a).c0_abs
    np.testing.assert_allclose(ob.solve_b_system(a, c0, 7), ob.b_closed(a, c0, 7), rtol=1e-9)


def test_h1_orthogonal_to_lambda0():
    from hardycs.hardy import inner_product
    from hardycs.spectral import phi_a_power

    h1 = ob.h1(0.5, 256)
    for k in range(6):
        assert abs(inner_product(h1, phi_a_power(0.5, 3 * k, 256))) < 1e-9


def test_g_examples():
    assert abs(ob.g_map(0.5)(0) + 0.5) < 1e-15
    np.testing.assert_allclose(ob.betas_simplified(0.5), [0.3125, 1.40625, 1.5625], atol=1e-15)
    np.testing.assert_allclose(ob.betas(0.5), ob.betas_simplified(0.5), atol=1e-14)


def test_f_norms_example():
    n = ob.f_norms(0.5)
    assert abs(n.actual - 2.1240234375) < 1e-12
    assert abs(n.required - 1.46484375) < 1e-15
    assert abs(n.gap - 0.6591796875) < 1e-12
    assert n.max_route_delta < 1e-12


@pytest.mark.parametrize("a", [0.5, 0.2 + 0.3j, 0.8 * cmath.exp(2.5j)])
def test_f_norm_by_quadrature(a):
    assert abs(boundary_norm2(ob.f_map(a)) - ob.f_norm2_closed(a)) < 1e-9 * ob.f_norm2_closed(a)


def test_gap_vanishes_only_at_origin():
    assert ob.gap_closed(1e-6) < 1e-11
    A = np.linspace(1e-6, 1 - 1e-9, 1000)
    assert np.all(A * (2 - A - A**2) > 0)  # |a|^2 + |a|^4 = 2 has no root in (0, 1)


@given(disk_points(0.05, 0.8), st.floats(0, 2 * math.pi))
def test_gap_phase_invariant(a, t):
    c0 = ob.constants(a).c0_abs
    base = ob.gap_via_h1(a, c0)
    assert abs(ob.gap_via_h1(a, c0 * cmath.exp(1j * t)) - base) < 1e-12


@pytest.mark.parametrize("a", default_grid()[::5])
def test_run_all_checks_pass(a):
    r = ob.run(a)
    failed = [c for c in r.checks if not c.passed]
    assert not failed
    assert r.gap > 0
    assert len(r.erratum_notes) == 2


def test_run_flags_mutated_constants():
    from dataclasses import replace

    def bad(a):
        k = ob.constants(a)
        return replace(k, rho=k.rho * (1 + 1e-3))

    names = {c.name for c in ob.run(0.5, constants_fn=bad).checks if not c.passed}
    assert "c_recurrence_vs_closed_form" in names


def test_verdict_examples():
    assert ob.verdict(moebius.rotation(cmath.exp(1j * math.pi / 7))).kind is VerdictKind.ROTATION
    assert ob.verdict(moebius.involution(0.5)).kind is VerdictKind.ORDER_TWO
    v = ob.verdict(moebius.build_elliptic(0.5, OMEGA))
    assert v.kind is VerdictKind.ELLIPTIC_ORDER_THREE and abs(v.gap - 0.6591796875) < 1e-10
    hyp = moebius.MoebiusMap.from_coeffs([0.5, 1], [1, 0.5])
    assert ob.verdict(hyp).kind is VerdictKind.NO_INTERIOR_FIXED_POINT
    assert ob.verdict(moebius.build_elliptic(0.5, 1j)).kind is VerdictKind.ELLIPTIC_ORDER_FOUR_PLUS
    assert ob.verdict(moebius.build_elliptic(0.5, cmath.exp(1j))).kind is VerdictKind.ELLIPTIC_INFINITE_ORDER


def test_verdict_falls_back_to_closed_form_near_boundary():
    v = ob.verdict(moebius.build_elliptic(0.97, OMEGA))
    assert v.kind is VerdictKind.ELLIPTIC_ORDER_THREE
    assert abs(v.gap - ob.gap_closed(0.97)) < 1e-12 and "closed form" in v.evidence


@given(disk_points(0, 0.9), st.floats(0, 2 * math.pi))
def test_verdict_stable_under_identity(a, t):
    phi = moebius.build_elliptic(a, cmath.exp(1j * t))
    I = moebius.identity()
    kinds = {ob.verdict(p, 64).kind for p in (phi, I @ phi, phi @ I)}
    assert len(kinds) == 1
