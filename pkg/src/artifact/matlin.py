"""Tolerance-aware complex matrix primitives.

Every rank or definiteness decision in the package goes through this module so
that a single :class:`Tolerance` governs all of them consistently.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Input lies outside the mathematical domain of an operation."""


@dataclass(frozen=True)
class Tolerance:
    """Thresholds for floating point rank and Loewner-order decisions.

    Attributes
    ----------
    rank_rtol : float
        Singular values below ``rank_rtol * sigma_max`` count as zero.
    psd_atol : float
        Eigenvalues above ``-psd_atol * (1 + ||A||)`` count as nonnegative.
    herm_atol : float
        Allowed relative deviation ``||A - A*||`` for Hermitian inputs.
    """

    rank_rtol: float = 1e-10
    psd_atol: float = 1e-9
    herm_atol: float = 1e-9

    def __post_init__(self):
        for name in ("rank_rtol", "psd_atol", "herm_atol"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be strictly positive, got {v}")


DEFAULT_TOL = Tolerance()


def as_cmatrix(A, name: str = "matrix") -> np.ndarray:
    """Return ``A`` as a finite 2-d complex array (scalars become 1x1)."""
    M = np.asarray(A, dtype=complex)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} has non-finite entries")
    return M


def norm(A) -> float:
    """Spectral norm (0 for empty matrices)."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def herm(A) -> np.ndarray:
    """Hermitian part ``(A + A*) / 2``."""
    A = np.asarray(A, dtype=complex)
    return (A + A.conj().T) / 2


def _cutoff(s: np.ndarray, tol: Tolerance, scale: float = 0.0) -> float:
    return tol.rank_rtol * max(s[0] if s.size else 0.0, scale)


def pinv(A, tol: Tolerance = DEFAULT_TOL, scale: float = 0.0) -> np.ndarray:
    """Moore-Penrose inverse by SVD with a hard cutoff.

    Singular values at or below ``rank_rtol * max(sigma_max, scale)`` are
    dropped; ``scale`` lets a matrix that is rounding noise relative to the
    data it came from invert to zero.
    """
    A = as_cmatrix(A)
    m, n = A.shape
    if A.size == 0:
        return np.zeros((n, m), dtype=complex)
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    keep = s > _cutoff(s, tol, scale)
    if not keep.any():
        return np.zeros((n, m), dtype=complex)
    return (Vh[keep].conj().T / s[keep]) @ U[:, keep].conj().T


def rank(A, tol: Tolerance = DEFAULT_TOL, scale: float = 0.0) -> int:
    """Numerical rank.

    ``scale`` sets an absolute reference so that a matrix which is tiny
    compared to the data it was derived from counts as zero.
    """
    A = as_cmatrix(A)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(s > tol.rank_rtol * max(s[0], scale)))


def range_basis(A, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases of ``ran A`` and of its orthogonal complement.

    The two blocks side by side form a unitary matrix.
    """
    A = as_cmatrix(A)
    U, s, _ = np.linalg.svd(A, full_matrices=True)
    r = int(np.sum(s > _cutoff(s, tol))) if s.size else 0
    return U[:, :r], U[:, r:]


def hermitian_deviation(A) -> float:
    A = np.asarray(A, dtype=complex)
    return norm(A - A.conj().T) / (1 + norm(A))


def min_eig(A) -> float:
    """Smallest eigenvalue of the Hermitian part."""
    A = herm(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(A)[0])


def psd_margin(A, tol: Tolerance = DEFAULT_TOL) -> float:
    """Scaled smallest eigenvalue; ``>= -tol.psd_atol`` means PSD."""
    return min_eig(A) / (1 + norm(A))


def is_psd(A, tol: Tolerance = DEFAULT_TOL) -> bool:
    A = as_cmatrix(A)
    if hermitian_deviation(A) > tol.herm_atol:
        return False
    return psd_margin(A) >= -tol.psd_atol


def sqrt_psd(A, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Unique PSD square root; eigenvalues below the rank cutoff are set to zero."""
    A = as_cmatrix(A)
    if A.shape[0] != A.shape[1]:
        raise DomainError("sqrt_psd needs a square matrix")
    if hermitian_deviation(A) > tol.herm_atol:
        raise DomainError("sqrt_psd: matrix is not Hermitian within tolerance")
    w, V = np.linalg.eigh(herm(A))
    if w.size and w[0] < -tol.psd_atol * (1 + norm(A)):
        raise DomainError(f"sqrt_psd: matrix is not PSD (min eigenvalue {w[0]:.3e})")
    # zero everything at or below the rank cutoff so that sqrt(A) has the rank of A
    cut = tol.rank_rtol * (np.abs(w).max() if w.size else 0.0)
    w = np.where(w > cut, w, 0.0)
    return (V * np.sqrt(w)) @ V.conj().T


def psd_truncate(A, tol: Tolerance = DEFAULT_TOL, scale: float = 0.0) -> np.ndarray:
    """Hermitian part of ``A`` with eigenvalues at or below the rank cutoff set to zero.

    The cutoff is ``rank_rtol * max(|lambda|_max, scale)``, matching :func:`rank`,
    so that factors built from the result have exactly the numerical rank.
    """
    A = as_cmatrix(A)
    w, V = np.linalg.eigh(herm(A))
    if w.size == 0:
        return herm(A)
    cut = tol.rank_rtol * max(np.abs(w).max(), scale)
    w = np.where(w > cut, w, 0.0)
    return herm((V * w) @ V.conj().T)


PROJECTOR_KINDS = ("range", "null", "range_adjoint", "null_adjoint")


def projector(A, which: str = "range", tol: Tolerance = DEFAULT_TOL, scale: float = 0.0) -> np.ndarray:
    """Orthogonal projector onto ran A, ker A, ran A* or ker A*.

    Computed as ``AA+``, ``I - A+A``, ``A+A`` and ``I - AA+`` respectively.
    """
    A = as_cmatrix(A)
    Ap = pinv(A, tol, scale)
    if which == "range":
        P = A @ Ap
    elif which == "null":
        P = np.eye(A.shape[1]) - Ap @ A
    elif which == "range_adjoint":
        P = Ap @ A
    elif which == "null_adjoint":
        P = np.eye(A.shape[0]) - A @ Ap
    else:
        raise ValueError(f"unknown projector kind {which!r}")
    return herm(P)


def parallel_sum(A, B, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """``A (A+B)+ B``."""
    A = as_cmatrix(A, "A")
    B = as_cmatrix(B, "B")
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch {A.shape} vs {B.shape}")
    return A @ pinv(A + B, tol) @ B


@dataclass(frozen=True)
class LoewnerReport:
    a_psd: bool
    b_psd: bool
    a_le_b: bool
    b_le_a: bool
    margin_a_le_b: float
    margin_b_le_a: float
    hermitian_deviation: float


def loewner(A, B, tol: Tolerance = DEFAULT_TOL) -> LoewnerReport:
    """Compare two square matrices in the Loewner order."""
    A = as_cmatrix(A, "A")
    B = as_cmatrix(B, "B")
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise ValueError("loewner needs square matrices of equal shape")
    dev = max(hermitian_deviation(A), hermitian_deviation(B))
    mab = psd_margin(B - A)
    mba = psd_margin(A - B)
    return LoewnerReport(
        a_psd=psd_margin(A) >= -tol.psd_atol,
        b_psd=psd_margin(B) >= -tol.psd_atol,
        a_le_b=mab >= -tol.psd_atol,
        b_le_a=mba >= -tol.psd_atol,
        margin_a_le_b=mab,
        margin_b_le_a=mba,
        hermitian_deviation=dev,
    )


def schur_complement(M, p: int, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """``D - C A+ B`` for the leading ``p x p`` block ``A`` of ``M``."""
    M = as_cmatrix(M)
    n = M.shape[0]
    if M.shape[1] != n:
        raise ValueError("schur_complement needs a square matrix")
    if not 1 <= p < n:
        raise ValueError(f"block size p={p} out of range for side {n}")
    A, B = M[:p, :p], M[:p, p:]
    C, D = M[p:, :p], M[p:, p:]
    return D - C @ pinv(A, tol) @ B
