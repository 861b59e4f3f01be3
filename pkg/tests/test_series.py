import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import disk_points
from hardycs import moebius
from hardycs.errors import ComposedPoleAtOrigin, DepthInsufficient
from hardycs.moebius import OMEGA
from hardycs.series import (
    Polynomial,
    RationalMap,
    TruncatedSeries,
    choose_depth,
    poly_mul,
    ps_compose,
    ps_mul,
    ps_pow,
    rat_compose,
    rat_to_series,
    tail_bound,
)
from hardycs.verify import random_rational


def test_poly_mul_examples():
    assert poly_mul(Polynomial([1, 1]), Polynomial([1, -1])).allclose(Polynomial([1, 0, -1]))
    assert poly_mul(Polynomial([3, 2]), Polynomial([0])).is_zero()
    assert poly_mul(Polynomial([0.5, -1]), Polynomial([0.5, -1])).allclose(Polynomial([0.25, -1, 1]))


def test_polynomial_trims_and_evaluates():
    p = Polynomial([1, 2, 0, 0])
    assert p.degree == 1
    assert p(2.0) == 5.0
    assert Polynomial([1, 0, 3]).derivative().allclose(Polynomial([0, 6]))


def test_rational_normalizes_den_at_zero():
    F = RationalMap.from_coeffs([2, 4], [2, 1])
    assert F.den.coeffs[0] == 1
    assert abs(F(0.3) - (2 + 4 * 0.3) / (2 + 0.3)) < 1e-15


def test_rational_pole_at_origin_rejected():
    with pytest.raises(ComposedPoleAtOrigin):
        RationalMap.from_coeffs([1], [0, 1])


def test_rat_compose_examples():
    pa = moebius.involution(0.5).map
    assert rat_compose(pa, pa).allclose(RationalMap.identity(), 1e-12)
    sq = rat_compose(RationalMap.monomial(2), RationalMap.from_coeffs([1, 1]))
    assert sq.allclose(RationalMap.from_coeffs([1, 2, 1]))


def test_conjugated_elliptic_is_rotation():
    phi = moebius.build_elliptic(0.5, OMEGA).map
    pa = moebius.involution(0.5).map
    tau = rat_compose(pa, rat_compose(phi, pa))
    assert tau.allclose(RationalMap.from_coeffs([0, OMEGA]), 1e-12)


def test_rat_to_series_examples():
    np.testing.assert_allclose(rat_to_series(RationalMap.from_coeffs([1], [1, -0.5]), 4).coeffs, [1, 0.5, 0.25, 0.125])
    np.testing.assert_allclose(
        rat_to_series(moebius.involution(0.5).map, 4).coeffs, [0.5, -0.75, -0.375, -0.1875], atol=1e-15
    )
    np.testing.assert_array_equal(rat_to_series(RationalMap.identity(), 3).coeffs, [0, 1, 0])


def test_phi_half_by_hand():
    # (0.5 - z) times sum 0.5^n z^n, written out term by term
    geo = 0.5 ** np.arange(8)
    hand = 0.5 * geo - np.concatenate([[0], geo[:-1]])
    np.testing.assert_allclose(rat_to_series(moebius.involution(0.5).map, 8).coeffs, hand, atol=1e-15)


def test_ps_mul_examples():
    f = TruncatedSeries(np.array([1, 1, 0], complex))
    g = TruncatedSeries(np.array([1, -1, 0], complex))
    np.testing.assert_allclose(ps_mul(f, g).coeffs, [1, 0, -1])
    assert ps_mul(f, TruncatedSeries.one(3)).allclose(f)
    pa = moebius.involution(0.5).map
    np.testing.assert_allclose(
        ps_pow(rat_to_series(pa, 64), 2).coeffs, rat_to_series(pa * pa, 64).coeffs, atol=1e-13
    )


@given(st.integers(0, 2**31 - 1))
def test_compose_matches_series_composition(seed):
    rng = np.random.default_rng(seed)
    F = random_rational(rng)
    b = 0.6 * cmath.exp(2j * np.pi * rng.uniform())
    G = moebius.involution(b).map - b
    N = 48
    lhs = rat_to_series(rat_compose(F, G), N).coeffs
    rhs = ps_compose(rat_to_series(F, N), rat_to_series(G, N)).coeffs
    assert np.max(np.abs(lhs - rhs)) < 1e-12


@given(disk_points(0, 0.9), disk_points(0, 0.9), disk_points(0, 0.9))
def test_rat_compose_associative_on_automorphisms(a, b, c):
    f, g, h = (moebius.involution(x).map for x in (a, b, c))
    assert rat_compose(rat_compose(f, g), h).allclose(rat_compose(f, rat_compose(g, h)), 1e-12)


@given(st.integers(0, 2**31 - 1))
def test_ps_mul_commutes_and_distributes(seed):
    rng = np.random.default_rng(seed)
    f, g, h = (rat_to_series(random_rational(rng), 32) for _ in range(3))
    assert ps_mul(f, g).allclose(ps_mul(g, f), 1e-13)
    assert ps_mul(f, g + h).allclose(ps_mul(f, g) + ps_mul(f, h), 1e-13)


def test_tail_bound_geometric():
    K = RationalMap.from_coeffs([1], [1, -0.5])
    # exact tail of sum 0.25^n beyond n = 10
    exact = np.sqrt(0.25**10 / (1 - 0.25))
    assert tail_bound(K, 10) == pytest.approx(exact, rel=0.05)


def test_choose_depth_doubles_then_gives_up():
    assert choose_depth(lambda d: 2.0 ** -d, 16, 1e-10) == 64
    with pytest.raises(DepthInsufficient):
        choose_depth(lambda d: 1.0, 16, 1e-10, max_depth=64)
