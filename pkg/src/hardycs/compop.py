"""Composition operators C_phi f = f o phi: exact action and matrix truncations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.signal import lfilter

from .errors import ZeroVector
from .hardy import HardyElement, Vector, _coeffs
from .moebius import MoebiusMap
from .series import RationalMap, rat_compose


@dataclass(frozen=True, eq=False)
class OperatorTruncation:
    """Matrix of C_phi in the monomial basis: column k holds the Taylor coefficients of phi^k."""

    entries: np.ndarray
    symbol: MoebiusMap

    @property
    def depth(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, v):
        return self.entries @ _coeffs(v)


Symbol = Union[MoebiusMap, RationalMap]
Operator = Union[MoebiusMap, RationalMap, OperatorTruncation]


def _rational(phi: Symbol) -> RationalMap:
    return phi.map if isinstance(phi, MoebiusMap) else phi


def truncate(phi: Symbol, depth: int) -> OperatorTruncation:
    """N x N truncation; each column is the previous one multiplied by phi."""
    F = _rational(phi)
    b, a = F.num.coeffs, F.den.coeffs
    T = np.zeros((depth, depth), complex)
    col = np.zeros(depth, complex)
    col[0] = 1.0
    for k in range(depth):
        T[:, k] = col
        col = lfilter(b, a, col)
    T.setflags(write=False)
    return OperatorTruncation(T, phi)


def adjoint(T: Union[OperatorTruncation, np.ndarray]) -> np.ndarray:
    """Conjugate transpose: the compression of C_phi* to the first N monomials."""
    M = T.entries if isinstance(T, OperatorTruncation) else np.asarray(T)
    return M.conj().T


def _matrix(phi: Operator, size: int) -> np.ndarray:
    # reuse a prebuilt truncation when it is large enough
    if isinstance(phi, OperatorTruncation):
        if phi.depth < size:
            raise ValueError(f"truncation of depth {phi.depth} is smaller than {size}")
        return phi.entries[:size, :size]
    return truncate(phi, size).entries


def apply_exact(phi: Symbol, f: RationalMap) -> RationalMap:
    return rat_compose(f, _rational(phi))


def apply_series(phi: Operator, v: Vector, depth: Optional[int] = None) -> np.ndarray:
    """First ``depth`` coefficients of C_phi v, using every carried coefficient of v."""
    c = _coeffs(v)
    n = c.size if depth is None else depth
    T = _matrix(phi, c.size)
    return T[:n, :] @ c


def eigen_residual(phi: Operator, v: Vector, lam: complex, depth: Optional[int] = None) -> float:
    """||C_phi v - lam v|| / ||v|| on the first ``depth`` coefficients.

    v may carry more coefficients than ``depth``; all of them feed C_phi v,
    so the only truncation is in what gets measured.
    """
    c = _coeffs(v)
    n = c.size if depth is None else depth
    ref = np.linalg.norm(c[:n])
    if ref == 0:
        raise ZeroVector("eigen_residual of the zero vector")
    r = apply_series(phi, c, n) - lam * c[:n]
    return float(np.linalg.norm(r) / ref)


def adjoint_residual(
    phi: Operator, v: Vector, lam: complex, depth: Optional[int] = None, compression: bool = False
) -> float:
    """||C_phi* v - lam v|| / ||v|| on the first ``depth`` coefficients.

    Row k of C_phi* v is <v, phi^k>.  By default the pairing runs over every
    carried coefficient of v; ``compression=True`` restricts it to the square
    depth x depth block, which is what the bare conjugate transpose sees.
    """
    c = _coeffs(v)
    n = c.size if depth is None else depth
    ref = np.linalg.norm(c[:n])
    if ref == 0:
        raise ZeroVector("adjoint_residual of the zero vector")
    if compression:
        w = adjoint(_matrix(phi, n)) @ c[:n]
    else:
        T = _matrix(phi, c.size)
        w = T[:, :n].conj().T @ c
    return float(np.linalg.norm(w - lam * c[:n]) / ref)


def operator_norm(T: OperatorTruncation) -> float:
    return float(np.linalg.norm(T.entries, 2))
