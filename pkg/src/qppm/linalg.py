"""Dense Hermitian linear algebra shared by every other module.

All routines take and return plain ``numpy`` arrays. Real symmetric input stays
real, which halves the cost of the eigendecompositions on the large Gram blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

DEFAULT_TOL = 1e-12


class LinalgError(ArithmeticError):
    """Raised when an eigendecomposition fails or a matrix is not usable."""


class NotPSDError(LinalgError):
    """Raised when a matrix that must be PSD has a significantly negative eigenvalue."""

    def __init__(self, eigenvalue: float, scale: float, tol: float):
        self.eigenvalue = eigenvalue
        super().__init__(
            f"matrix is not PSD: eigenvalue {eigenvalue:.3e} below -{tol:g} * {scale:.3e}"
        )


@dataclass(frozen=True)
class Eid:
    """Eigendecomposition ``a = vectors @ diag(values) @ vectors^*``, values descending."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def hermitian(a) -> np.ndarray:
    """Return ``(a + a^*) / 2`` after checking that ``a`` is square."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.iscomplexobj(a):
        a = a.astype(float, copy=False)
    return (a + a.conj().T) / 2


def eid_hermitian(a) -> Eid:
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.

    Ties keep the order LAPACK returned them in (stable sort), so repeated runs
    give identical factor matrices.
    """
    a = hermitian(a)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise LinalgError(f"eigendecomposition of {a.shape[0]}x{a.shape[0]} matrix failed: {exc}") from exc
    order = np.argsort(-w, kind="stable")
    return Eid(values=w[order], vectors=v[:, order])


def _checked_spectrum(a, tol: float) -> tuple[Eid, float]:
    eid = eid_hermitian(a)
    scale = float(np.max(np.abs(eid.values)))
    low = float(eid.values[-1])
    if low < -tol * scale:
        raise NotPSDError(low, scale, tol)
    return eid, scale


def sqrt_psd(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a numerically PSD matrix.

    Eigenvalues in ``[-tol * lambda_max, 0)`` are treated as roundoff and clamped to 0.
    """
    eid, _ = _checked_spectrum(a, tol)
    root = np.sqrt(np.clip(eid.values, 0.0, None))
    return (eid.vectors * root) @ eid.vectors.conj().T


def inv_sqrt_psd(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse square root: eigenvalues ``<= tol * lambda_max`` map to 0."""
    eid, scale = _checked_spectrum(a, tol)
    keep = eid.values > tol * scale
    inv = np.zeros_like(eid.values)
    inv[keep] = 1.0 / np.sqrt(eid.values[keep])
    return (eid.vectors * inv) @ eid.vectors.conj().T


def range_projector(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector onto the numerical range of a PSD matrix."""
    eid, scale = _checked_spectrum(a, tol)
    z = eid.vectors[:, eid.values > tol * scale]
    return z @ z.conj().T


def kron(*mats) -> np.ndarray:
    """Kronecker product of one or more matrices, leftmost factor most significant."""
    if not mats:
        raise ValueError("kron needs at least one factor")
    return reduce(np.kron, (np.asarray(x) for x in mats))
