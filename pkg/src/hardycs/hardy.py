"""The Hardy space H^2 of the disk, modelled on truncated Taylor series."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DepthMismatch, NotInDisk, NotInner, PoleInsideRadius
from .series import RationalMap, TruncatedSeries, rat_to_series

INNER_SAMPLES = 512
INNER_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class HardyElement:
    """An H^2 function: its truncated series and, when known, a closed form."""

    series: TruncatedSeries
    exact: Optional[RationalMap] = None

    @classmethod
    def from_rational(cls, F: RationalMap, depth: int) -> "HardyElement":
        return cls(rat_to_series(F, depth), F)

    @property
    def depth(self) -> int:
        return self.series.depth

    @property
    def coeffs(self) -> np.ndarray:
        return self.series.coeffs

    def norm(self) -> float:
        return self.series.norm()

    def norm2(self) -> float:
        return float(np.vdot(self.coeffs, self.coeffs).real)

    def truncate(self, depth: int) -> "HardyElement":
        return HardyElement(self.series.truncate(depth), self.exact)

    def __add__(self, other: "HardyElement") -> "HardyElement":
        exact = None
        if self.exact is not None and other.exact is not None:
            exact = self.exact + other.exact
        return HardyElement(self.series + other.series, exact)

    def __sub__(self, other: "HardyElement") -> "HardyElement":
        return self + (-1.0) * other

    def __mul__(self, c):
        if not np.isscalar(c):
            return NotImplemented
        return HardyElement(self.series * c, None if self.exact is None else self.exact * c)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class KernelElement(HardyElement):
    w: complex = 0j


Vector = Union[HardyElement, TruncatedSeries, np.ndarray]


def _coeffs(f: Vector) -> np.ndarray:
    if isinstance(f, HardyElement):
        return f.coeffs
    if isinstance(f, TruncatedSeries):
        return f.coeffs
    return np.asarray(f, dtype=complex)


def inner_product(f: Vector, g: Vector) -> complex:
    """<f, g> = sum_n f_n conj(g_n): linear in f, conjugate-linear in g."""
    a, b = _coeffs(f), _coeffs(g)
    if a.size != b.size:
        raise DepthMismatch(f"depths differ: {a.size} vs {b.size}")
    return complex(np.vdot(b, a))


def norm2(f: Vector) -> float:
    return inner_product(f, f).real


def kernel(w: complex, depth: int) -> KernelElement:
    """Reproducing kernel K_w(z) = 1/(1 - conj(w) z)."""
    w = complex(w)
    if abs(w) >= 1:
        raise NotInDisk(f"|w| = {abs(w)} is not < 1")
    F = RationalMap.from_coeffs([1.0], [1.0, -w.conjugate()])
    coeffs = w.conjugate() ** np.arange(depth)
    return KernelElement(TruncatedSeries(coeffs), F, w)


def boundary_inner_product(
    f: RationalMap, g: RationalMap, samples: int = 4096, radius: float = 0.999
) -> complex:
    """Trapezoidal rule for the integral of f conj(g) over |z| = radius, d theta / 2 pi.

    Independent of the coefficient pairing; used as a cross-check only.
    """
    if samples < 2 or samples & (samples - 1):
        raise ValueError("samples must be a power of two")
    if not 0 < radius < 1:
        raise ValueError("radius must lie in (0, 1)")
    for F in (f, g):
        if F.den.degree > 0 and F.min_pole_modulus() <= radius:
            raise PoleInsideRadius(f"pole of modulus {F.min_pole_modulus():.6g} inside radius {radius}")
    z = radius * np.exp(2j * np.pi * np.arange(samples) / samples)
    return complex(np.mean(f(z) * np.conj(g(z))))


def is_inner(g: RationalMap, samples: int = INNER_SAMPLES, tol: float = INNER_TOL) -> bool:
    if g.den.degree > 0 and g.min_pole_modulus() <= 1.0:
        return False
    z = np.exp(2j * np.pi * np.arange(samples) / samples)
    return bool(np.max(np.abs(np.abs(g(z)) - 1.0)) < tol)


def inner_moment(g: RationalMap, m: int, n: int) -> complex:
    """<g^m, g^n> for an inner function g.

    Multiplication by an inner function is an isometry, so the pairing
    reduces to <g^(m-n), 1> = g(0)^(m-n) when m >= n.
    """
    if m < 0 or n < 0:
        raise ValueError("moment indices must be non-negative")
    if not is_inner(g):
        raise NotInner("|g| deviates from 1 on the unit circle")
    g0 = complex(g(0.0))
    if m >= n:
        return g0 ** (m - n)
    return g0.conjugate() ** (n - m)
