"""Disk automorphisms: construction, composition, classification, order."""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import NotAutomorphism, NotInDisk, NotUnimodular, PoleAt
from .series import Polynomial, RationalMap, rat_compose

FORM_TOL = 1e-10
Q_MAX = 64


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    """A linear fractional map (alpha z + beta) / (gamma z + delta) with delta = 1."""

    map: RationalMap

    def __post_init__(self):
        if self.map.num.degree > 1 or self.map.den.degree > 1:
            raise ValueError("Moebius maps have numerator and denominator of degree <= 1")
        alpha, beta, gamma, delta = self.matrix.ravel()
        if abs(alpha * delta - beta * gamma) <= 1e-14:
            raise ValueError("degenerate linear fractional map")

    @classmethod
    def from_coeffs(cls, num, den) -> "MoebiusMap":
        return cls(RationalMap.from_coeffs(num, den))

    @property
    def matrix(self) -> np.ndarray:
        """[[alpha, beta], [gamma, delta]] for (alpha z + beta)/(gamma z + delta)."""
        n = np.zeros(2, complex)
        d = np.zeros(2, complex)
        n[: self.map.num.coeffs.size] = self.map.num.coeffs
        d[: self.map.den.coeffs.size] = self.map.den.coeffs
        return np.array([[n[1], n[0]], [d[1], d[0]]])

    def __call__(self, z):
        return self.map(z)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        """self @ other is the composition self(other(z))."""
        return MoebiusMap(rat_compose(self.map, other.map))

    def iterate(self, n: int) -> "MoebiusMap":
        out = identity()
        for _ in range(n):
            out = self @ out
        return out

    def allclose(self, other: "MoebiusMap", tol: float = 1e-12) -> bool:
        return self.map.allclose(other.map, tol)

    def is_identity(self, tol: float = 1e-12) -> bool:
        return self.allclose(identity(), tol)

    def __repr__(self):
        (a, b), (c, d) = self.matrix
        return f"MoebiusMap(({a:.6g})z + ({b:.6g}) / ({c:.6g})z + ({d:.6g}))"


class Kind(enum.Enum):
    IDENTITY = "Identity"
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    HYPERBOLIC = "Hyperbolic"


@dataclass(frozen=True)
class AutoClass:
    kind: Kind
    fixed_point_in_disk: Optional[complex] = None
    multiplier: Optional[complex] = None
    boundary_fixed_points: Optional[Tuple[complex, ...]] = None


@dataclass(frozen=True)
class EllipticData:
    fixed_point: complex
    multiplier: complex
    order: float  # int, or math.inf when no order <= Q_MAX exists


def identity() -> MoebiusMap:
    return MoebiusMap(RationalMap.identity())


def rotation(omega: complex) -> MoebiusMap:
    return MoebiusMap.from_coeffs([0.0, omega], [1.0])


def involution(a: complex) -> MoebiusMap:
    """phi_a(z) = (a - z)/(1 - conj(a) z): swaps 0 and a, and is its own inverse."""
    a = complex(a)
    if abs(a) >= 1:
        raise NotInDisk(f"|a| = {abs(a)} is not < 1")
    return MoebiusMap.from_coeffs([a, -1.0], [1.0, -a.conjugate()])


def build_elliptic(a: complex, omega: complex) -> MoebiusMap:
    """The automorphism phi_a o (omega z) o phi_a, fixing a with derivative omega there."""
    a, omega = complex(a), complex(omega)
    if abs(a) >= 1:
        raise NotInDisk(f"|a| = {abs(a)} is not < 1")
    if abs(abs(omega) - 1.0) > FORM_TOL:
        raise NotUnimodular(f"|omega| = {abs(omega)} != 1")
    pa = involution(a)
    return pa @ rotation(omega) @ pa


def automorphism_form(phi: MoebiusMap, tol: float = FORM_TOL) -> Tuple[complex, complex]:
    """Return (u, alpha) with phi(z) = u (alpha - z)/(1 - conj(alpha) z), |u| = 1, |alpha| < 1.

    Raises NotAutomorphism if phi is not of that form.
    """
    (n1, n0), (d1, d0) = phi.matrix
    # d0 == 1 by normalization
    alpha = -complex(d1).conjugate()
    u = -complex(n1)
    if abs(abs(u) - 1.0) > tol:
        raise NotAutomorphism(f"rotation factor has modulus {abs(u)}")
    if abs(alpha) >= 1.0 - tol:
        raise NotAutomorphism(f"|alpha| = {abs(alpha)} is not < 1")
    if abs(n0 - u * alpha) > tol:
        raise NotAutomorphism("constant term inconsistent with automorphism form")
    return u, alpha


def is_automorphism(phi: MoebiusMap) -> bool:
    try:
        automorphism_form(phi)
    except NotAutomorphism:
        return False
    return True


def derivative_at(phi: MoebiusMap, z: complex) -> complex:
    (a, b), (c, d) = phi.matrix
    den = c * z + d
    if abs(den) == 0:
        raise PoleAt(f"pole at z = {z}")
    return complex((a * d - b * c) / den**2)


def classify(phi: MoebiusMap) -> AutoClass:
    """Sort a disk automorphism by its fixed points.

    Fixed points solve c z^2 + (d - a) z - b = 0.  A root strictly inside the
    disk means elliptic; otherwise both roots are on the circle and the map
    is parabolic (double root) or hyperbolic (two distinct roots).
    """
    automorphism_form(phi)
    (a, b), (c, d) = phi.matrix
    if phi.is_identity(FORM_TOL):
        return AutoClass(Kind.IDENTITY, fixed_point_in_disk=None, multiplier=1.0 + 0j)

    if abs(c) <= FORM_TOL:
        # affine automorphism of the disk: a rotation about 0
        return AutoClass(Kind.ELLIPTIC, fixed_point_in_disk=0j, multiplier=derivative_at(phi, 0j))

    B = d - a
    disc = B * B + 4 * c * b
    scale = abs(B) ** 2 + abs(4 * c * b)
    if abs(disc) <= FORM_TOL * scale:
        # a double root; in floating point it splits by ~sqrt(eps), so test first
        r = complex(-B / (2 * c))
        return AutoClass(Kind.PARABOLIC, boundary_fixed_points=(r,))
    # c z^2 + B z - b = 0 without cancellation: q/c and -b/q
    sq = cmath.sqrt(disc)
    q = -(B + sq) / 2 if abs(B + sq) >= abs(B - sq) else -(B - sq) / 2
    roots = (q / c, -b / q)
    inside = [r for r in roots if abs(r) < 1 - FORM_TOL]
    if inside:
        fp = complex(inside[0])
        return AutoClass(Kind.ELLIPTIC, fixed_point_in_disk=fp, multiplier=derivative_at(phi, fp))
    r1, r2 = sorted((complex(r) for r in roots), key=lambda r: (r.real, r.imag))
    return AutoClass(Kind.HYPERBOLIC, boundary_fixed_points=(r1, r2))


def elliptic_data(phi: MoebiusMap, q_max: int = Q_MAX) -> EllipticData:
    cls = classify(phi)
    if cls.kind is Kind.IDENTITY:
        return EllipticData(0j, 1.0 + 0j, 1)
    if cls.kind is not Kind.ELLIPTIC:
        raise ValueError(f"{cls.kind.value} automorphism has no interior fixed point")
    d = EllipticData(cls.fixed_point_in_disk, cls.multiplier, math.inf)
    return EllipticData(d.fixed_point, d.multiplier, elliptic_order(d, q_max))


def elliptic_order(d: EllipticData, q_max: int = Q_MAX):
    """Least q <= q_max with |omega^q - 1| < 1e-10, else math.inf."""
    w = complex(d.multiplier)
    p = 1.0 + 0j
    for q in range(1, q_max + 1):
        p *= w
        if abs(p - 1.0) < FORM_TOL:
            return q
    return math.inf


def unimodular(theta: float) -> complex:
    return cmath.exp(1j * theta)


OMEGA = unimodular(2 * math.pi / 3)
