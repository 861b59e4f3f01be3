"""Forced images of e_0, e_1 under a hypothetical conjugation, and the norm gap.

If C_phi were C-symmetric for an order-3 elliptic phi with fixed point a != 0,
then C e_0 = h0 and C e_1 = h1 would be pinned down explicitly.  The function
f = (h1 - conj(a) h0) / (scalar) then has two incompatible squared norms: one
computed directly, one forced by C being an isometry.  Their difference, the
gap, is strictly positive for every 0 < |a| < 1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
import scipy.linalg
from scipy.signal import lfilter

from . import compop
from .errors import (
    DepthInsufficient,
    FixedPointAtOrigin,
    InternalMismatch,
    NotInDisk,
    SingularSystem,
)
from .hardy import HardyElement, inner_moment, inner_product, is_inner
from .moebius import (
    OMEGA,
    AutoClass,
    Kind,
    MoebiusMap,
    build_elliptic,
    classify,
    elliptic_data,
    involution,
)
from .series import (
    DEFAULT_DEPTH,
    RationalMap,
    TruncatedSeries,
    choose_depth,
    rat_to_series,
    tail_bound,
)
from .spectral import phi_a_power

SEQ_LEN = 8
ORTH_K = 5
MOMENT_K = 8
DELTA_K = 16

ERRATUM_NORM_LINE = (
    "required norm: the intermediate expression (1-|a|^4)^2 (1+|a|^2)(1-|a|^2) does not equal "
    "(1-|a|^4)^2 ||e1 - a e0||^2 = (1-|a|^4)^2 (1+|a|^2)/(1-|a|^2); "
    "the final value (1-|a|^4)(1+|a|^2)^2 is the correct one and is used"
)
NOTE_MOMENT_SYMBOL = (
    "moment identity <h0, u^(3k)> = c0 (1-|a|^4) rho^k is evaluated with u = phi_a "
    "(the involution), not the elliptic symbol phi"
)


# ---------------------------------------------------------------- constants


@dataclass(frozen=True)
class ObstructionConstants:
    a: complex
    rho: complex
    rho_tilde: complex
    c0_abs: float


def _check_a(a: complex) -> complex:
    a = complex(a)
    if abs(a) >= 1:
        raise NotInDisk(f"|a| = {abs(a)} is not < 1")
    if a == 0:
        raise FixedPointAtOrigin("rotation case: no obstruction defined")
    return a


def constants(a: complex) -> ObstructionConstants:
    a = _check_a(a)
    A = abs(a) ** 2
    lead = -(a.conjugate() ** 2) / a
    rho = lead * (1 - A) / (1 - A**2)
    rho_tilde = lead * (1 - A**3) / (1 - A**2)
    return ObstructionConstants(a, rho, rho_tilde, 1.0 / (1 - A**2))


ConstantsFn = Callable[[complex], ObstructionConstants]


# ---------------------------------------------------------------- sequences


def _diag_weight(a: complex) -> complex:
    A = abs(a) ** 2
    return a * (1 - A**2) / (1 - A**3)


def solve_c_recurrence(a: complex, c0: complex, K: int) -> np.ndarray:
    """c_1..c_K from the triangular system

        sum_{j<=k} c_j conj(a)^(3k+2-3j) + c_{k+1} a (1-|a|^4)/(1-|a|^6) = 0,  k < K.

    This uses no closed form for c_j; it is the oracle for c_j = c0 rho~ rho^(j-1).
    """
    a = complex(a)
    if a == 0:
        raise SingularSystem("system is singular at a = 0")
    ab = a.conjugate()
    L = np.zeros((K, K), complex)
    rhs = np.zeros(K, complex)
    for k in range(K):
        rhs[k] = -c0 * ab ** (3 * k + 2)
        for j in range(1, k + 1):
            L[k, j - 1] = ab ** (3 * (k - j) + 2)
        L[k, k] = _diag_weight(a)
    if np.any(np.abs(np.diag(L)) == 0):
        raise SingularSystem("zero pivot")
    return scipy.linalg.solve_triangular(L, rhs, lower=True)


def c_closed(a: complex, c0: complex, K: int, consts: Optional[ObstructionConstants] = None) -> np.ndarray:
    """c_0..c_K from c_1 = rho~ c_0 and c_(j+1) = rho c_j."""
    k = consts or constants(a)
    out = np.empty(K + 1, complex)
    out[0] = c0
    if K:
        out[1:] = c0 * k.rho_tilde * k.rho ** np.arange(K)
    return out


def delta_closed(a: complex, K: int, consts: Optional[ObstructionConstants] = None) -> np.ndarray:
    """delta_k = rho^k + k rho~ rho^(k-1), k = 0..K."""
    k = consts or constants(a)
    n = np.arange(K + 1)
    rho_prev = np.where(n > 0, k.rho ** np.maximum(n - 1, 0), 0)
    return k.rho**n + n * k.rho_tilde * rho_prev


def delta_recurrence(a: complex, K: int, consts: Optional[ObstructionConstants] = None) -> np.ndarray:
    k = consts or constants(a)
    d = np.empty(K + 1, complex)
    d[0] = 1.0
    if K >= 1:
        d[1] = k.rho + k.rho_tilde
    for n in range(1, K):
        d[n + 1] = k.rho * d[n] + k.rho_tilde * k.rho**n
    return d


def _b_scale(a: complex, c0: complex) -> complex:
    A = abs(a) ** 2
    return -c0 * a.conjugate() * (1 - A**3) / (a * (1 - A**2))


def b_closed(a: complex, c0: complex, K: int, consts: Optional[ObstructionConstants] = None) -> np.ndarray:
    a = complex(a)
    return _b_scale(a, c0) * delta_closed(a, K, consts)


def solve_b_system(a: complex, c0: complex, K: int, consts: Optional[ObstructionConstants] = None) -> np.ndarray:
    """b_0..b_K from the triangular system making h1 orthogonal to phi_a^(3k):

        sum_{j<k} b_j conj(a)^(3k-3j-1) + b_k a (1-|a|^4)/(1-|a|^6) + c0 conj(a) rho^k = 0.
    """
    a = complex(a)
    k = consts or constants(a)
    ab = a.conjugate()
    n = K + 1
    L = np.zeros((n, n), complex)
    rhs = np.array([-c0 * ab * k.rho**i for i in range(n)])
    for i in range(n):
        for j in range(i):
            L[i, j] = ab ** (3 * (i - j) - 1)
        L[i, i] = _diag_weight(a)
    return scipy.linalg.solve_triangular(L, rhs, lower=True)


# ---------------------------------------------------------------- closed forms


def _in_phi_a(F: RationalMap, a: complex) -> RationalMap:
    return F.compose(involution(a).map)


def h0_outer(a: complex, c0: Optional[complex] = None, consts: Optional[ObstructionConstants] = None) -> RationalMap:
    """H with h0 = H o phi_a: H(u) = c0 (1 - conj(a)^3 u^3) / (1 - rho u^3)."""
    a = _check_a(a)
    k = consts or constants(a)
    c0 = k.c0_abs if c0 is None else c0
    ab3 = a.conjugate() ** 3
    return RationalMap.from_coeffs([c0, 0, 0, -c0 * ab3], [1, 0, 0, -k.rho])


def g_outer(a: complex, consts: Optional[ObstructionConstants] = None) -> RationalMap:
    a = _check_a(a)
    k = consts or constants(a)
    return RationalMap.from_coeffs([k.rho.conjugate(), 0, 0, -1], [1, 0, 0, -k.rho])


def f_outer(a: complex, consts: Optional[ObstructionConstants] = None) -> RationalMap:
    a = _check_a(a)
    k = consts or constants(a)
    A = abs(a) ** 2
    pre = (1 - A**3) / (1 - A**2)
    ab3 = a.conjugate() ** 3
    den = np.convolve([1, 0, 0, -k.rho], [1, 0, 0, -k.rho])
    return RationalMap.from_coeffs([pre, 0, 0, -pre * ab3], den)


def h1_part_outer(
    a: complex, c0: Optional[complex] = None, consts: Optional[ObstructionConstants] = None
) -> RationalMap:
    a = _check_a(a)
    k = consts or constants(a)
    c0 = k.c0_abs if c0 is None else c0
    s = _b_scale(a, c0)
    ab3 = a.conjugate() ** 3
    den = np.convolve([1, 0, 0, -k.rho], [1, 0, 0, -k.rho])
    return RationalMap.from_coeffs([0, s, 0, 0, -s * ab3], den)


def h0_map(a: complex, c0: Optional[complex] = None, consts: Optional[ObstructionConstants] = None) -> RationalMap:
    """h0 = c0 (1 - conj(a)^3 phi_a^3) / (1 - rho phi_a^3)."""
    return _in_phi_a(h0_outer(a, c0, consts), a)


def g_map(a: complex, consts: Optional[ObstructionConstants] = None) -> RationalMap:
    """g = (conj(rho) - phi_a^3) / (1 - rho phi_a^3); an inner function."""
    return _in_phi_a(g_outer(a, consts), a)


def f_map(a: complex, consts: Optional[ObstructionConstants] = None) -> RationalMap:
    """f = (1-|a|^6)/(1-|a|^4) (1 - conj(a)^3 phi_a^3) / (1 - rho phi_a^3)^2."""
    return _in_phi_a(f_outer(a, consts), a)


def h1_part_map(
    a: complex, c0: Optional[complex] = None, consts: Optional[ObstructionConstants] = None
) -> RationalMap:
    """h1 - conj(a) h0 = -c0 conj(a)(1-|a|^6)/(a(1-|a|^4)) phi_a (1 - conj(a)^3 phi_a^3)/(1 - rho phi_a^3)^2."""
    return _in_phi_a(h1_part_outer(a, c0, consts), a)


# Each function below is scale u^p prod(1 - z_i u) / prod(1 - p_j u) with
# u = phi_a(z).  Series are built one first-order filter per factor, which
# keeps roundoff at the level of a single Moebius expansion instead of that
# of the degree-6 expanded polynomials.


@dataclass(frozen=True)
class Factored:
    scale: complex
    u_power: int
    zeros: Tuple[complex, ...]
    poles: Tuple[complex, ...]

    def __mul__(self, other: "Factored") -> "Factored":
        return Factored(self.scale * other.scale, self.u_power + other.u_power,
                        self.zeros + other.zeros, self.poles + other.poles)

    def series(self, psi: MoebiusMap, depth: int) -> TruncatedSeries:
        """Coefficients of the function with u = psi(z)."""
        (al, be), (ga, de) = psi.matrix
        x = np.zeros(depth, complex)
        x[0] = self.scale
        for _ in range(self.u_power):
            x = lfilter([be, al], [de, ga], x)
        for z in self.zeros:
            x = lfilter([de - z * be, ga - z * al], [de, ga], x)
        for p in self.poles:
            x = lfilter([de, ga], [de - p * be, ga - p * al], x)
        return TruncatedSeries(x)


def _cube_roots(w: complex) -> Tuple[complex, ...]:
    r = complex(w) ** (1 / 3)
    return tuple(r * OMEGA**j for j in range(3))


def h0_factored(a: complex, c0: Optional[complex] = None, consts: Optional[ObstructionConstants] = None) -> Factored:
    a = _check_a(a)
    k = consts or constants(a)
    c0 = k.c0_abs if c0 is None else c0
    return Factored(c0, 0, _cube_roots(a.conjugate() ** 3), _cube_roots(k.rho))


def g_factored(a: complex, consts: Optional[ObstructionConstants] = None) -> Factored:
    a = _check_a(a)
    k = consts or constants(a)
    rb = k.rho.conjugate()
    return Factored(rb, 0, tuple(1 / r for r in _cube_roots(rb)), _cube_roots(k.rho))


def f_factored(a: complex, consts: Optional[ObstructionConstants] = None) -> Factored:
    a = _check_a(a)
    k = consts or constants(a)
    A = abs(a) ** 2
    return Factored((1 - A**3) / (1 - A**2), 0, _cube_roots(a.conjugate() ** 3), 2 * _cube_roots(k.rho))


def h1_part_factored(a: complex, c0: Optional[complex] = None, consts: Optional[ObstructionConstants] = None) -> Factored:
    a = _check_a(a)
    k = consts or constants(a)
    c0 = k.c0_abs if c0 is None else c0
    return Factored(_b_scale(a, c0), 1, _cube_roots(a.conjugate() ** 3), 2 * _cube_roots(k.rho))


def h0_element(a: complex, depth: int, c0: Optional[complex] = None, consts: Optional[ObstructionConstants] = None) -> HardyElement:
    return HardyElement(h0_factored(a, c0, consts).series(involution(a), depth), h0_map(a, c0, consts))


def g_element(a: complex, depth: int, consts: Optional[ObstructionConstants] = None) -> HardyElement:
    return HardyElement(g_factored(a, consts).series(involution(a), depth), g_map(a, consts))


def f_element(a: complex, depth: int, consts: Optional[ObstructionConstants] = None) -> HardyElement:
    return HardyElement(f_factored(a, consts).series(involution(a), depth), f_map(a, consts))


def h1_part_element(
    a: complex, depth: int, c0: Optional[complex] = None, consts: Optional[ObstructionConstants] = None
) -> HardyElement:
    return HardyElement(h1_part_factored(a, c0, consts).series(involution(a), depth), h1_part_map(a, c0, consts))


def gammas(a: complex, c0: Optional[complex] = None) -> Tuple[complex, complex]:
    """(gamma1, gamma2) with h0 = gamma1 g + gamma2."""
    a = _check_a(a)
    A = abs(a) ** 2
    c0 = constants(a).c0_abs if c0 is None else c0
    return c0 * a.conjugate() ** 2 / a * (1 + A), c0 * (1 + A)


def betas(a: complex, consts: Optional[ObstructionConstants] = None) -> Tuple[complex, complex, complex]:
    """(beta1, beta2, beta3) with f = beta1 g^2 + beta2 g + beta3, from rho."""
    a = _check_a(a)
    k = consts or constants(a)
    A = abs(a) ** 2
    ab3 = a.conjugate() ** 3
    K = (1 - A**2) * (1 + A) ** 2 / (1 - A**3)
    rho = k.rho
    return (
        K * (rho**2 - ab3 * rho),
        K * (-2 * rho + ab3 + ab3 * abs(rho) ** 2),
        K * (1 - ab3 * rho.conjugate()),
    )


def betas_simplified(a: complex) -> Tuple[complex, complex, complex]:
    a = _check_a(a)
    A = abs(a) ** 2
    ab = a.conjugate()
    return ab**4 / a**2 * (1 + A), ab**2 / a * (1 + A) * (2 + A), (1 + A) ** 2 + 0j


def f_norm2_closed(a: complex) -> float:
    A = abs(a) ** 2
    return (1 + 2 * A - 2 * A**2 - A**3) * (1 + A) ** 2


def f_norm2_required(a: complex) -> float:
    A = abs(a) ** 2
    return (1 - A**2) * (1 + A) ** 2


def gap_closed(a: complex) -> float:
    A = abs(a) ** 2
    return A * (2 - A - A**2) * (1 + A) ** 2


# ---------------------------------------------------------------- depth


def pipeline_depth(a: complex, depth: int = DEFAULT_DEPTH, tol: float = 1e-10, max_depth: Optional[int] = None) -> int:
    """Smallest doubling of ``depth`` at which every closed form used has a tail below ``tol``."""
    maps = (h0_map(a), f_map(a), h1_part_map(a), g_map(a))
    return choose_depth(lambda d: max(tail_bound(F, d) for F in maps), depth, tol, max_depth)


# ---------------------------------------------------------------- operations


def h0(a: complex, depth: int = DEFAULT_DEPTH, c0: Optional[complex] = None) -> HardyElement:
    return h0_element(a, depth, c0)


@dataclass(frozen=True)
class Moments:
    closed: np.ndarray
    series: np.ndarray

    @property
    def max_delta(self) -> float:
        return float(np.max(np.abs(self.closed - self.series)))


def h0_moments(a: complex, k_max: int = MOMENT_K, depth: Optional[int] = None, c0: Optional[complex] = None) -> Moments:
    """<h0, phi_a^(3k)> for k = 0..k_max: closed form c0 (1-|a|^4) rho^k and series pairing."""
    a = _check_a(a)
    k = constants(a)
    c0 = k.c0_abs if c0 is None else c0
    M = depth or pipeline_depth(a)
    h = h0(a, M, c0)
    A = abs(a) ** 2
    closed = c0 * (1 - A**2) * k.rho ** np.arange(k_max + 1)
    series = np.array([inner_product(h, phi_a_power(a, 3 * j, M)) for j in range(k_max + 1)])
    return Moments(closed, series)


@dataclass(frozen=True, eq=False)
class H1Part:
    element: HardyElement
    delta: np.ndarray
    b: np.ndarray


def h1_part(a: complex, depth: int = DEFAULT_DEPTH, c0: Optional[complex] = None, K: int = SEQ_LEN) -> H1Part:
    a = _check_a(a)
    c0 = constants(a).c0_abs if c0 is None else c0
    el = h1_part_element(a, depth, c0)
    return H1Part(el, delta_closed(a, K - 1), b_closed(a, c0, K - 1))


def h1(a: complex, depth: int = DEFAULT_DEPTH, c0: Optional[complex] = None) -> HardyElement:
    """h1 = (h1 - conj(a) h0) + conj(a) h0."""
    a = _check_a(a)
    return h1_part(a, depth, c0).element + complex(a).conjugate() * h0(a, depth, c0)


def g_moment_norm2(a: complex, coeffs: Tuple[complex, ...]) -> float:
    """||sum_i coeffs[i] g^(n-1-i)||^2 through the inner-function moments of g."""
    g = g_map(a)
    n = len(coeffs)
    powers = [n - 1 - i for i in range(n)]
    total = 0j
    for ci, pi in zip(coeffs, powers):
        for cj, pj in zip(coeffs, powers):
            total += ci * np.conj(cj) * inner_moment(g, pi, pj)
    return float(total.real)


@dataclass(frozen=True)
class FNorms:
    actual: float  # series route
    actual_closed: float
    actual_moment: float
    required: float
    depth: int

    @property
    def gap(self) -> float:
        return self.actual - self.required

    @property
    def max_route_delta(self) -> float:
        v = (self.actual, self.actual_closed, self.actual_moment)
        return max(abs(x - y) for x in v for y in v) / abs(self.actual_closed)


ROUTE_TOL = 1e-8


def f_norms(a: complex, depth: Optional[int] = None) -> FNorms:
    """Three computations of ||f||^2 and the value the isometry would force.

    Raises InternalMismatch when the routes disagree by more than 1e-8 relative.
    """
    a = _check_a(a)
    M = depth or pipeline_depth(a)
    f = f_element(a, M)
    out = FNorms(
        actual=f.norm2(),
        actual_closed=f_norm2_closed(a),
        actual_moment=g_moment_norm2(a, betas(a)),
        required=f_norm2_required(a),
        depth=M,
    )
    if out.max_route_delta > ROUTE_TOL:
        raise InternalMismatch(f"||f||^2 routes disagree by {out.max_route_delta:.3e} at a = {a}")
    return out


def gap_via_h1(a: complex, c0: complex, depth: Optional[int] = None) -> float:
    """Gap from ||h1 - conj(a) h0|| = |c0| ||f||, for a c0 of any phase."""
    a = _check_a(a)
    M = depth or pipeline_depth(a)
    part = h1_part_element(a, M, c0)
    return part.norm2() / abs(c0) ** 2 - f_norm2_required(a)


# ---------------------------------------------------------------- report


@dataclass(frozen=True)
class Check:
    name: str
    delta: float
    tol: float
    passed: bool

    @classmethod
    def within(cls, name: str, delta: float, tol: float) -> "Check":
        delta = float(delta)
        return cls(name, delta, tol, bool(np.isfinite(delta) and delta <= tol))


class VerdictKind(enum.Enum):
    ROTATION = "ComplexSymmetric_Rotation"
    ORDER_TWO = "ComplexSymmetric_OrderTwo"
    NO_INTERIOR_FIXED_POINT = "Not_NoInteriorFixedPoint"
    ELLIPTIC_ORDER_THREE = "Not_EllipticOrderThree"
    ELLIPTIC_ORDER_FOUR_PLUS = "Not_EllipticOrderFourPlus"
    ELLIPTIC_INFINITE_ORDER = "Not_EllipticInfiniteOrder"

    @property
    def complex_symmetric(self) -> bool:
        return self in (VerdictKind.ROTATION, VerdictKind.ORDER_TWO)


@dataclass(frozen=True)
class SymmetryVerdict:
    kind: VerdictKind
    evidence: str
    gap: Optional[float] = None


@dataclass(frozen=True, eq=False)
class ObstructionReport:
    constants: ObstructionConstants
    depth: int
    working_depth: int
    c_seq: np.ndarray
    delta_seq: np.ndarray
    b_seq: np.ndarray
    h0: HardyElement
    h1_part: HardyElement
    g: HardyElement
    f: HardyElement
    gamma1: complex
    gamma2: complex
    beta1: complex
    beta2: complex
    beta3: complex
    norms: FNorms
    h0_norm2: float
    checks: Tuple[Check, ...]
    erratum_notes: Tuple[str, ...] = (ERRATUM_NORM_LINE, NOTE_MOMENT_SYMBOL)

    @property
    def a(self) -> complex:
        return self.constants.a

    @property
    def f_norm2_actual(self) -> float:
        return self.norms.actual

    @property
    def f_norm2_required(self) -> float:
        return self.norms.required

    @property
    def gap(self) -> float:
        return self.norms.gap

    @property
    def verdict(self) -> SymmetryVerdict:
        return SymmetryVerdict(
            VerdictKind.ELLIPTIC_ORDER_THREE,
            "order-3 elliptic symbol with non-zero fixed point: conjugation isometry "
            f"contradicted by a norm gap of {self.gap:.12g}",
            self.gap,
        )

    @property
    def max_crosscheck_delta(self) -> float:
        return max(c.delta for c in self.checks if c.tol < 1)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)


def _rel(x, y) -> float:
    x, y = np.asarray(x), np.asarray(y)
    return float(np.max(np.abs(x - y) / np.maximum(np.abs(y), 1e-300)))


def run(
    a: complex,
    depth: int = DEFAULT_DEPTH,
    omegas: Tuple[complex, ...] = (OMEGA, OMEGA.conjugate()),
    max_depth: Optional[int] = None,
    constants_fn: ConstantsFn = constants,
) -> ObstructionReport:
    """The whole pipeline at one fixed point a.

    ``constants_fn`` exists so that a perturbed formula can be injected; the
    recurrence check must then fail.
    """
    a = _check_a(a)
    k = constants_fn(a)
    c0 = k.c0_abs
    A = abs(a) ** 2
    M = pipeline_depth(a, depth, max_depth=max_depth)

    h0_F = h0_map(a, c0, k)
    h0_el = h0_element(a, M, c0, k)
    g_F = g_map(a, k)
    g_el = g_element(a, M, k)
    f_F = f_map(a, k)
    f_el = f_element(a, M, k)
    part_F = h1_part_map(a, c0, k)
    part_el = h1_part_element(a, M, c0, k)
    h1_el = part_el + a.conjugate() * h0_el

    checks: List[Check] = []
    c_solved = solve_c_recurrence(a, c0, SEQ_LEN)
    c_form = c_closed(a, c0, SEQ_LEN, k)
    checks.append(Check.within("c_recurrence_vs_closed_form", _rel(c_solved, c_form[1:]), 1e-9))

    h0_n2 = h0_el.norm2()
    checks.append(Check.within("h0_norm_isometry", abs(h0_n2 - 1 / (1 - A)) * (1 - A), 1e-9))
    unit = h0_element(a, M, 1.0, k).norm2()
    c0_recovered = math.sqrt((1 / (1 - A)) / unit)
    checks.append(Check.within("c0_from_norm_equation", abs(c0_recovered - 1 / (1 - A**2)), 1e-10))

    pa_pows = {j: phi_a_power(a, j, M) for j in range(3 * max(ORTH_K, MOMENT_K) + 3)}
    orth0 = max(abs(inner_product(h0_el, pa_pows[3 * j + 2])) for j in range(ORTH_K + 1))
    checks.append(Check.within("h0_orthogonal_to_Lambda2", orth0, 1e-9))

    mom_closed = c0 * (1 - A**2) * k.rho ** np.arange(MOMENT_K + 1)
    mom_series = np.array([inner_product(h0_el, pa_pows[3 * j]) for j in range(MOMENT_K + 1)])
    checks.append(Check.within("h0_moments", float(np.max(np.abs(mom_closed - mom_series))), 1e-9))

    d_cl = delta_closed(a, DELTA_K, k)
    d_rec = delta_recurrence(a, DELTA_K, k)
    checks.append(Check.within("delta_closed_vs_recurrence", float(np.max(np.abs(d_cl - d_rec))), 1e-10))
    b_cl = b_closed(a, c0, SEQ_LEN - 1, k)
    b_sol = solve_b_system(a, c0, SEQ_LEN - 1, k)
    checks.append(Check.within("b_closed_vs_system", _rel(b_sol, b_cl), 1e-9))

    orth1 = max(abs(inner_product(h1_el, pa_pows[3 * j])) for j in range(ORTH_K + 1))
    checks.append(Check.within("h1_orthogonal_to_Lambda0", orth1, 1e-9))

    g1, g2 = gammas(a, c0)
    checks.append(
        Check.within("h0_equals_gamma_combination", float(np.max(np.abs(h0_el.coeffs - (g1 * g_el.coeffs + g2 * (np.arange(M) == 0))))), 1e-10)
    )
    checks.append(Check.within("g_is_inner", 0.0 if is_inner(g_F) else math.inf, 1e-8))
    checks.append(Check.within("g0_closed_form", abs(g_F(0.0) - (-(a**2) / a.conjugate())), 1e-12))

    b1, b2, b3 = betas(a, k)
    checks.append(Check.within("beta_forms_agree", _rel([b1, b2, b3], betas_simplified(a)), 1e-12))
    gf = g_factored(a, k)
    g2_coeffs = (gf * gf).series(involution(a), M).coeffs
    combo = b1 * g2_coeffs + b2 * g_el.coeffs + b3 * (np.arange(M) == 0)
    checks.append(Check.within("f_equals_beta_combination", float(np.max(np.abs(f_el.coeffs - combo))), 1e-10))

    norms = FNorms(
        actual=f_el.norm2(),
        actual_closed=f_norm2_closed(a),
        actual_moment=g_moment_norm2(a, (b1, b2, b3)),
        required=f_norm2_required(a),
        depth=M,
    )
    checks.append(Check.within("f_norm_routes_agree", norms.max_route_delta, ROUTE_TOL))
    gap = norms.gap
    checks.append(Check.within("gap_closed_form", abs(gap - gap_closed(a)) / gap_closed(a), 1e-10))
    checks.append(Check.within("gap_positive", 0.0 if gap > 0 else math.inf, 0.0))

    part_n2 = part_el.norm2()
    checks.append(Check.within("h1_part_norm_is_c0_times_f", abs(part_n2 - c0**2 * norms.actual) / part_n2, 1e-8))
    # the isometry would force part_n2 = (1+|a|^2)/(1-|a|^2); it misses by exactly gap |c0|^2
    violation = part_n2 - (1 + A) / (1 - A)
    checks.append(Check.within("isometry_violation_equals_gap", abs(violation - gap * c0**2) / (gap * c0**2), 1e-8))

    for w in omegas:
        phi = build_elliptic(a, w)
        r0 = _exact_residual(phi, h0_factored(a, c0, k), a, 1.0, M)
        checks.append(Check.within(f"h0_in_Lambda0[omega={_fmt(w)}]", r0, 1e-8))
        lam = complex(w)
        r1 = _exact_residual(phi, h1_part_factored(a, c0, k), a, lam, M)
        checks.append(Check.within(f"h1_part_in_Lambda1[omega={_fmt(w)}]", r1, 1e-8))

    return ObstructionReport(
        constants=k,
        depth=depth,
        working_depth=M,
        c_seq=c_form[:SEQ_LEN],
        delta_seq=d_cl[:SEQ_LEN],
        b_seq=b_cl[:SEQ_LEN],
        h0=h0_el,
        h1_part=part_el,
        g=g_el,
        f=f_el,
        gamma1=g1,
        gamma2=g2,
        beta1=b1,
        beta2=b2,
        beta3=b3,
        norms=norms,
        h0_norm2=h0_n2,
        checks=tuple(checks),
    )


def _fmt(w: complex) -> str:
    return f"{w.real:+.4f}{w.imag:+.4f}i"


def _exact_residual(phi: MoebiusMap, F: Factored, a: complex, lam: complex, depth: int) -> float:
    """||F o phi - lam F|| / ||F|| on ``depth`` coefficients, F a function of u = phi_a.

    F o phi is the same factored function of u = (phi_a o phi)(z), which is
    again Moebius, so no polynomial degree grows.
    """
    pa = involution(a)
    lhs = F.series(pa @ phi, depth).coeffs
    rhs = F.series(pa, depth).coeffs
    return float(np.linalg.norm(lhs - lam * rhs) / np.linalg.norm(rhs))


# ---------------------------------------------------------------- verdict


def verdict(phi: MoebiusMap, depth: int = DEFAULT_DEPTH) -> SymmetryVerdict:
    """Decision table for complex symmetry of C_phi, phi a disk automorphism.

    Parabolic and hyperbolic symbols have no interior fixed point, which any
    complex symmetric C_phi requires.  Rotations are normal; order-2 symbols
    satisfy C_phi^2 = I.  Non-rotation elliptic symbols of order >= 4 are
    excluded by the known classification, and order 3 by the norm gap.
    """
    cls: AutoClass = classify(phi)
    if cls.kind is Kind.IDENTITY:
        return SymmetryVerdict(VerdictKind.ROTATION, "identity map: C_phi = I is normal")
    if cls.kind in (Kind.PARABOLIC, Kind.HYPERBOLIC):
        return SymmetryVerdict(
            VerdictKind.NO_INTERIOR_FIXED_POINT,
            f"{cls.kind.value.lower()} automorphism has no fixed point in the disk; "
            "a complex symmetric C_phi needs one",
        )
    data = elliptic_data(phi)
    a = data.fixed_point
    if abs(a) <= 1e-10:
        return SymmetryVerdict(VerdictKind.ROTATION, "rotation about 0: C_phi is normal")
    if data.order == 2:
        return SymmetryVerdict(VerdictKind.ORDER_TWO, "elliptic of order two: C_phi^2 = I")
    if data.order == 3:
        try:
            gap = f_norms(a, pipeline_depth(a, depth)).gap
            how = "series"
        except DepthInsufficient:
            gap = gap_closed(a)
            how = "closed form (series depth insufficient)"
        return SymmetryVerdict(
            VerdictKind.ELLIPTIC_ORDER_THREE,
            f"order-3 elliptic, fixed point {a:.6g}: norm gap {gap:.12g} ({how}) contradicts isometry",
            gap,
        )
    if data.order == math.inf:
        return SymmetryVerdict(
            VerdictKind.ELLIPTIC_INFINITE_ORDER,
            "elliptic of infinite order (no order <= 64) with non-zero fixed point: only rotations qualify",
        )
    return SymmetryVerdict(
        VerdictKind.ELLIPTIC_ORDER_FOUR_PLUS,
        f"elliptic of order {data.order} with non-zero fixed point: only rotations qualify",
    )
