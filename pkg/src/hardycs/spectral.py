"""Eigenvector families of C_phi and C_phi* for an order-3 elliptic symbol.

With phi_a the involution swapping 0 and a and e_k = K_a phi_a^k, the
eigenspace of C_phi for omega^m is spanned by phi_a^(3j+m), and the
eigenspace of C_phi* for conj(omega)^m by e_(3j+m) - a e_(3j+m-1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from . import compop
from .errors import NotInDisk
from .hardy import HardyElement, inner_product, kernel
from .moebius import MoebiusMap, build_elliptic, involution
from .series import (
    DEFAULT_DEPTH,
    RationalMap,
    TruncatedSeries,
    choose_depth,
    ps_mul_rational,
    tail_estimate,
)

DEFAULT_COUNT = 5
VECTOR_TAIL_TOL = 1e-13
FORWARD_TOL = 1e-8
ADJOINT_TOL = 1e-6
RANK_COND_MAX = 1e8


def _check_disk(a: complex):
    if abs(a) >= 1:
        raise NotInDisk(f"|a| = {abs(a)} is not < 1")


def _kernel_map(a: complex) -> RationalMap:
    return RationalMap.from_coeffs([1.0], [1.0, -complex(a).conjugate()])


def _powers_series(a: complex, k: int, depth: int, with_kernel: bool) -> TruncatedSeries:
    # phi_a^k (times K_a) by k first-order filters; never expand (a - z)^k
    pa = involution(a).map
    s = TruncatedSeries.one(depth)
    if with_kernel:
        s = ps_mul_rational(s, _kernel_map(a))
    for _ in range(k):
        s = ps_mul_rational(s, pa)
    return s


def phi_a_power(a: complex, k: int, depth: int = DEFAULT_DEPTH) -> HardyElement:
    _check_disk(a)
    return HardyElement(_powers_series(a, k, depth, False), involution(a).map ** k)


def e_vector(a: complex, k: int, depth: int = DEFAULT_DEPTH) -> HardyElement:
    """e_k = K_a phi_a^k; e_{-1} is the zero vector."""
    _check_disk(a)
    if k < 0:
        return HardyElement(TruncatedSeries.zeros(depth), RationalMap.constant(0.0))
    exact = _kernel_map(a) * involution(a).map ** k
    return HardyElement(_powers_series(a, k, depth, True), exact)


def working_depth(a: complex, k_max: int, depth: int = DEFAULT_DEPTH, tol: float = VECTOR_TAIL_TOL) -> int:
    """Depth at which e_k, phi_a^k (k <= k_max) have coefficient tails below ``tol``."""
    _check_disk(a)
    ratio = abs(a)

    def tail(d: int) -> float:
        if ratio == 0:
            return 0.0
        return tail_estimate(_powers_series(a, k_max, 2 * d, True).coeffs, d, ratio)

    return choose_depth(tail, depth, tol)


@dataclass(frozen=True, eq=False)
class EigenBasis:
    m: int
    side: str  # "forward" or "adjoint"
    eigenvalue: complex
    vectors: Tuple[HardyElement, ...]
    depth: int
    residuals: Tuple[float, ...] = field(default=())

    @property
    def working_depth(self) -> int:
        return self.vectors[0].depth if self.vectors else self.depth

    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0


def _symbol(a, omega, phi) -> MoebiusMap:
    return phi if phi is not None else build_elliptic(a, omega)


def lambda_basis(
    a: complex,
    omega: complex,
    m: int,
    count: int = DEFAULT_COUNT,
    depth: int = DEFAULT_DEPTH,
    T: Optional[compop.OperatorTruncation] = None,
) -> EigenBasis:
    """phi_a^(3j+m), j < count, with their C_phi residuals against omega^m."""
    if m not in (0, 1, 2):
        raise ValueError("m must be 0, 1 or 2")
    M = working_depth(a, 3 * (count - 1) + m, depth)
    if T is None or T.depth < M:
        T = compop.truncate(build_elliptic(a, omega), M)
    lam = complex(omega) ** m
    vecs = tuple(phi_a_power(a, 3 * j + m, M) for j in range(count))
    res = tuple(compop.eigen_residual(T, v, lam, depth) for v in vecs)
    return EigenBasis(m, "forward", lam, vecs, depth, res)


def lambda_star_vector(a: complex, k: int, depth: int) -> HardyElement:
    """e_k - a e_{k-1}, the image of z^k under C_{phi_a}*."""
    return e_vector(a, k, depth) - complex(a) * e_vector(a, k - 1, depth)


def lambda_star_basis(
    a: complex,
    omega: complex,
    m: int,
    count: int = DEFAULT_COUNT,
    depth: int = DEFAULT_DEPTH,
    T: Optional[compop.OperatorTruncation] = None,
) -> EigenBasis:
    """e_(3j+m) - a e_(3j+m-1), j < count, with C_phi* residuals against conj(omega)^m."""
    if m not in (0, 1, 2):
        raise ValueError("m must be 0, 1 or 2")
    M = working_depth(a, 3 * (count - 1) + m, depth)
    if T is None or T.depth < M:
        T = compop.truncate(build_elliptic(a, omega), M)
    lam = complex(omega).conjugate() ** m
    vecs = tuple(lambda_star_vector(a, 3 * j + m, M) for j in range(count))
    res = tuple(compop.adjoint_residual(T, v, lam, depth) for v in vecs)
    return EigenBasis(m, "adjoint", lam, vecs, depth, res)


@dataclass(frozen=True, eq=False)
class EFamily:
    a: complex
    members: Tuple[HardyElement, ...]

    def gram(self) -> np.ndarray:
        C = np.array([e.coeffs for e in self.members])
        return np.conj(C) @ C.T  # G[j, k] = <e_k, e_j>

    def orthogonality_error(self) -> float:
        G = self.gram()
        return float(np.max(np.abs(G - np.diag(np.diag(G))))) if len(self.members) > 1 else 0.0

    def norm_error(self) -> float:
        target = 1.0 / (1.0 - abs(self.a) ** 2)
        return float(np.max(np.abs(np.diag(self.gram()).real - target)))


def e_family(a: complex, count: int, depth: int = DEFAULT_DEPTH) -> EFamily:
    M = working_depth(a, count - 1, depth)
    return EFamily(complex(a), tuple(e_vector(a, k, M) for k in range(count)))


@dataclass(frozen=True)
class OrthogonalityEntry:
    label: str
    value: complex
    expect_zero: bool


def cross_orthogonality(
    a: complex,
    omega: complex,
    depth: int = DEFAULT_DEPTH,
    h0: Optional[HardyElement] = None,
    count: int = DEFAULT_COUNT,
) -> List[OrthogonalityEntry]:
    """The specific orthogonality relations used against the eigenspaces.

    e_0 is orthogonal to the conj(omega)^2 adjoint eigenvectors; h0, when
    supplied, must be orthogonal to the omega^2 forward eigenvectors.  The
    forward families themselves are not mutually orthogonal, which the
    <1, phi_a^2> entry records.
    """
    a = complex(a)
    M = working_depth(a, 3 * count, depth)
    if h0 is not None:
        M = max(M, h0.depth)
    out = []
    e0 = e_vector(a, 0, M)
    for j in range(count):
        k = 3 * j + 2
        v = lambda_star_vector(a, k, M)
        out.append(OrthogonalityEntry(f"<e_0, e_{k} - a e_{k - 1}>", inner_product(e0, v), True))
    if h0 is not None:
        for j in range(count):
            k = 3 * j + 2
            v = phi_a_power(a, k, h0.depth)
            out.append(OrthogonalityEntry(f"<h0, phi_a^{k}>", inner_product(h0, v), True))
    one = TruncatedSeries.one(M)
    out.append(OrthogonalityEntry("<1, phi_a^2>", inner_product(one, phi_a_power(a, 2, M)), False))
    return out


def span_condition(a: complex, count: int = DEFAULT_COUNT, depth: Optional[int] = None) -> float:
    """Conditioning of the columns phi_a^k, k < 3*count, truncated to ``depth`` rows.

    Ratio of the largest to smallest |R_ii| of a column-pivoted QR.  ``depth``
    defaults to 3*count (a square section).  Square sections of C_{phi_a}
    become ill-conditioned quickly as |a| grows even though C_{phi_a} is
    invertible; with enough rows the ratio stays near
    (1 + |a|)/(1 - |a|).
    """
    n = 3 * count
    rows = n if depth is None else depth
    A = np.column_stack([phi_a_power(a, k, rows).coeffs for k in range(n)])
    R = scipy.linalg.qr(A, mode="r", pivoting=True)[0]
    d = np.abs(np.diag(R))
    return float(d[0] / d[-1]) if d[-1] > 0 else float("inf")
