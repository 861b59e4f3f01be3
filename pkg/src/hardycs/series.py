"""Polynomial / rational-function algebra and truncated power series over C.

Everything here is an immutable value.  Coefficient arrays are indexed by the
power of z (``coeffs[k]`` multiplies ``z**k``), which is the opposite of the
``numpy.roots`` / ``numpy.polyval`` convention.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.signal import lfilter

from .errors import ComposedPoleAtOrigin, DepthInsufficient, DepthMismatch, PoleAt

DEFAULT_DEPTH = 256
MAX_DEPTH = 2048
TAIL_TOL = 1e-10

# relative size below which a leading/constant coefficient counts as zero
_TRIM_RTOL = 1e-14

Scalar = Union[int, float, complex]


def _as_coeffs(values) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=complex)).copy()
    if arr.ndim != 1:
        raise ValueError("coefficients must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coefficients must be finite")
    arr.setflags(write=False)
    return arr


def _trim(arr: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(arr)) if arr.size else 0.0
    if scale == 0.0:
        return np.zeros(1, dtype=complex)
    n = arr.size
    while n > 1 and abs(arr[n - 1]) <= _TRIM_RTOL * scale:
        n -= 1
    return arr[:n]


@dataclass(frozen=True, eq=False)
class Polynomial:
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(_trim(_as_coeffs(self.coeffs))))

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1.0) -> "Polynomial":
        arr = np.zeros(k + 1, dtype=complex)
        arr[k] = c
        return cls(arr)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def is_zero(self) -> bool:
        return self.coeffs.size == 1 and self.coeffs[0] == 0

    def __call__(self, z):
        return npoly.polyval(z, self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        return Polynomial(npoly.polyadd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        return Polynomial(npoly.polysub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __neg__(self):
        return Polynomial(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        if np.isscalar(other):
            return Polynomial(self.coeffs * complex(other))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        out = Polynomial([1.0])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial([0.0])
        return Polynomial(npoly.polyder(self.coeffs))

    def roots(self) -> np.ndarray:
        # numpy.roots builds the companion matrix and takes its eigenvalues
        if self.degree < 1:
            return np.zeros(0, dtype=complex)
        return np.roots(self.coeffs[::-1])

    def allclose(self, other: "Polynomial", tol: float = 1e-12) -> bool:
        n = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(n, complex)
        b = np.zeros(n, complex)
        a[: self.coeffs.size] = self.coeffs
        b[: other.coeffs.size] = other.coeffs
        return bool(np.max(np.abs(a - b)) <= tol)

    def __repr__(self):
        return f"Polynomial({np.array2string(self.coeffs, precision=6)})"


def _as_poly(p) -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    if np.isscalar(p):
        return Polynomial([p])
    return Polynomial(p)


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact convolution product."""
    return Polynomial(np.convolve(p.coeffs, q.coeffs))


@dataclass(frozen=True, eq=False)
class RationalMap:
    """A quotient num/den of polynomials, stored with den(0) = 1.

    Only maps analytic at the origin are representable; construction raises
    ComposedPoleAtOrigin when the denominator vanishes there.
    """

    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        num, den = _as_poly(self.num), _as_poly(self.den)
        if den.is_zero():
            raise ZeroDivisionError("denominator is identically zero")
        d0 = den.coeffs[0]
        if abs(d0) <= _TRIM_RTOL * np.max(np.abs(den.coeffs)):
            raise ComposedPoleAtOrigin("denominator vanishes at z = 0")
        object.__setattr__(self, "num", Polynomial(num.coeffs / d0))
        object.__setattr__(self, "den", Polynomial(den.coeffs / d0))

    @classmethod
    def from_coeffs(cls, num: Sequence[Scalar], den: Sequence[Scalar] = (1.0,)) -> "RationalMap":
        return cls(Polynomial(num), Polynomial(den))

    @classmethod
    def identity(cls) -> "RationalMap":
        return cls.from_coeffs([0.0, 1.0])

    @classmethod
    def constant(cls, c: Scalar) -> "RationalMap":
        return cls.from_coeffs([c])

    @classmethod
    def monomial(cls, k: int) -> "RationalMap":
        return cls(Polynomial.monomial(k), Polynomial([1.0]))

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def __call__(self, z):
        d = self.den(z)
        if np.isscalar(d) and d == 0:
            raise PoleAt(f"pole at z = {z}")
        return self.num(z) / d

    def __add__(self, other):
        other = _as_rat(other)
        return RationalMap(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_rat(other)
        return RationalMap(self.num * other.den - other.num * self.den, self.den * other.den)

    def __rsub__(self, other):
        return _as_rat(other) - self

    def __neg__(self):
        return RationalMap(-self.num, self.den)

    def __mul__(self, other):
        if isinstance(other, RationalMap):
            return RationalMap(self.num * other.num, self.den * other.den)
        if np.isscalar(other):
            return RationalMap(self.num * complex(other), self.den)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rat(other)
        return RationalMap(self.num * other.den, self.den * other.num)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        return RationalMap(self.num**k, self.den**k)

    def compose(self, inner: "RationalMap") -> "RationalMap":
        return rat_compose(self, inner)

    def derivative(self) -> "RationalMap":
        n, d = self.num, self.den
        return RationalMap(n.derivative() * d - n * d.derivative(), d * d)

    def poles(self) -> np.ndarray:
        return self.den.roots()

    def min_pole_modulus(self) -> float:
        p = self.poles()
        return float(np.min(np.abs(p))) if p.size else math.inf

    def series(self, depth: int) -> "TruncatedSeries":
        return rat_to_series(self, depth)

    def allclose(self, other: "RationalMap", tol: float = 1e-12) -> bool:
        return self.num.allclose(other.num, tol) and self.den.allclose(other.den, tol)

    def __repr__(self):
        return f"RationalMap(num={self.num.coeffs!r}, den={self.den.coeffs!r})"


def _as_rat(x) -> RationalMap:
    if isinstance(x, RationalMap):
        return x
    return RationalMap.constant(x)


def rat_compose(outer: RationalMap, inner: RationalMap) -> RationalMap:
    """Exact rational representation of ``outer(inner(z))``.

    With outer = sum f_i z^i / sum g_i z^i of degree d and inner = P/Q, the
    composition is sum f_i P^i Q^(d-i) / sum g_i P^i Q^(d-i).
    """
    d = outer.degree
    P, Q = inner.num, inner.den
    p_pows = [Polynomial([1.0])]
    q_pows = [Polynomial([1.0])]
    for _ in range(d):
        p_pows.append(p_pows[-1] * P)
        q_pows.append(q_pows[-1] * Q)

    def lift(poly: Polynomial) -> Polynomial:
        acc = Polynomial([0.0])
        for i, c in enumerate(poly.coeffs):
            if c != 0:
                acc = acc + (p_pows[i] * q_pows[d - i]) * c
        return acc

    return RationalMap(lift(outer.num), lift(outer.den))


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """First ``depth`` Taylor coefficients of an analytic function."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    @classmethod
    def zeros(cls, depth: int) -> "TruncatedSeries":
        return cls(np.zeros(depth, complex))

    @classmethod
    def one(cls, depth: int) -> "TruncatedSeries":
        c = np.zeros(depth, complex)
        c[0] = 1.0
        return cls(c)

    @property
    def depth(self) -> int:
        return self.coeffs.size

    def _check(self, other: "TruncatedSeries"):
        if other.depth != self.depth:
            raise DepthMismatch(f"depths differ: {self.depth} vs {other.depth}")

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return TruncatedSeries(self.coeffs + other.coeffs)
        c = self.coeffs.copy()
        c[0] += other
        return TruncatedSeries(c)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TruncatedSeries(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return ps_mul(self, other)
        if np.isscalar(other):
            return TruncatedSeries(self.coeffs * complex(other))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return ps_pow(self, k)

    def truncate(self, depth: int) -> "TruncatedSeries":
        if depth > self.depth:
            raise DepthMismatch(f"cannot truncate depth {self.depth} to {depth}")
        return TruncatedSeries(self.coeffs[:depth])

    def __call__(self, z):
        return npoly.polyval(z, self.coeffs)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def allclose(self, other: "TruncatedSeries", tol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs)) <= tol)

    def __repr__(self):
        head = np.array2string(self.coeffs[:6], precision=6)
        return f"TruncatedSeries(depth={self.depth}, head={head})"


def rat_to_series(F: RationalMap, depth: int) -> TruncatedSeries:
    """Taylor coefficients of F up to ``depth`` via the recursion den * out = num."""
    if depth < 1:
        raise ValueError("depth must be positive")
    impulse = np.zeros(depth, complex)
    impulse[0] = 1.0
    return TruncatedSeries(lfilter(F.num.coeffs, F.den.coeffs, impulse))


def ps_mul_rational(s: TruncatedSeries, F: RationalMap) -> TruncatedSeries:
    """Multiply a series by a rational function; exact in all retained coefficients.

    Prefer repeated application over expanding high powers of F: the expanded
    polynomials of a high-multiplicity pole lose most of their precision.
    """
    return TruncatedSeries(lfilter(F.num.coeffs, F.den.coeffs, s.coeffs))


def ps_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    if f.depth != g.depth:
        raise DepthMismatch(f"depths differ: {f.depth} vs {g.depth}")
    return TruncatedSeries(np.convolve(f.coeffs, g.coeffs)[: f.depth])


def ps_pow(s: TruncatedSeries, k: int) -> TruncatedSeries:
    if k < 0:
        raise ValueError("negative power")
    out = TruncatedSeries.one(s.depth)
    base = s
    while k:
        if k & 1:
            out = ps_mul(out, base)
        base = ps_mul(base, base)
        k >>= 1
    return out


def ps_compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Truncated composition f(g(z)) by Horner's rule.

    Exact in the retained coefficients only when g(0) = 0; otherwise the
    omitted terms are of size |g(0)|^depth relative to f's decay.
    """
    if f.depth != g.depth:
        raise DepthMismatch(f"depths differ: {f.depth} vs {g.depth}")
    acc = TruncatedSeries.zeros(f.depth) + f.coeffs[-1]
    for c in f.coeffs[-2::-1]:
        acc = ps_mul(acc, g) + c
    return acc


def tail_estimate(extended: np.ndarray, depth: int, ratio: float) -> float:
    """l2 size of the coefficients from ``depth`` on.

    ``extended`` holds the coefficients up to some index beyond ``depth``;
    what lies past its end is bounded geometrically with ``ratio`` (or the
    observed decay ratio, whichever is slower).
    """
    block = np.asarray(extended)[depth:]
    if block.size < 2:
        raise ValueError("need at least two coefficients beyond depth")
    last, prev = abs(block[-1]), abs(block[-2])
    q = ratio
    if prev > 0:
        q = max(q, last / prev)
    if q >= 1.0:
        return math.inf
    rem2 = last**2 * q**2 / (1.0 - q**2)
    return float(math.sqrt(np.sum(np.abs(block) ** 2) + rem2))


def tail_bound(F: RationalMap, depth: int) -> float:
    """Estimated l2 norm of the Taylor coefficients of F beyond ``depth``.

    The decay ratio beyond the explicitly computed block comes from the
    smallest denominator root modulus.
    """
    if F.den.degree == 0:
        extra = F.num.coeffs[depth:] if F.num.coeffs.size > depth else np.zeros(0)
        return float(np.linalg.norm(extra))
    R = F.min_pole_modulus()
    if R <= 1.0:
        return math.inf
    ext = rat_to_series(F, 2 * depth).coeffs
    return tail_estimate(ext, depth, 1.0 / R)


def choose_depth(
    tail: Callable[[int], float],
    depth: int = DEFAULT_DEPTH,
    tol: float = TAIL_TOL,
    max_depth: int | None = None,
) -> int:
    """Smallest depth, doubling from ``depth``, with ``tail(depth) <= tol``.

    The cap is ``max(MAX_DEPTH, depth)``; past it DepthInsufficient is raised.
    """
    cap = max(MAX_DEPTH, depth) if max_depth is None else max_depth
    d = depth
    while True:
        t = tail(d)
        if t <= tol:
            return d
        if d * 2 > cap:
            raise DepthInsufficient(
                f"tail bound {t:.3e} exceeds {tol:.1e} at depth {d} (cap {cap})", tail=t, depth=d
            )
        d *= 2
