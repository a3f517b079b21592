"""Quadratic step polynomials, the resolvent polynomial and block LFTs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matlin as ml
from .hausdorff_seq import MomentSequence, classify, derived_sequences
from .matlin import DEFAULT_TOL, DomainError, Tolerance
from .schur_transform import transform_chain


class SingularDenominator(DomainError):
    """The LFT denominator ``CP + DQ`` is singular at the requested point."""


TRIM_RTOL = 1e-12


@dataclass(frozen=True)
class MatrixPoly2q:
    """``sum_n z^n C_n`` with ``2q x 2q`` coefficients ``coeffs[n]``."""

    q: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 3 or c.shape[1:] != (2 * self.q, 2 * self.q):
            raise ValueError(f"coefficients must have shape (n, {2 * self.q}, {2 * self.q})")
        object.__setattr__(self, "coeffs", _trim(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z: complex) -> np.ndarray:
        return eval_matrix_poly(self, z)

    def __matmul__(self, other: "MatrixPoly2q") -> "MatrixPoly2q":
        a, b = self.coeffs, other.coeffs
        out = np.zeros((len(a) + len(b) - 1,) + a.shape[1:], dtype=complex)
        for i, Ai in enumerate(a):
            for j, Bj in enumerate(b):
                out[i + j] += Ai @ Bj
        return MatrixPoly2q(self.q, out)


def _trim(c: np.ndarray) -> np.ndarray:
    norms = [ml.norm(C) for C in c]
    top = max(norms) if norms else 0.0
    n = len(c)
    while n > 1 and norms[n - 1] <= TRIM_RTOL * top:
        n -= 1
    return c[:n]


def eval_matrix_poly(P: MatrixPoly2q, z: complex) -> np.ndarray:
    """Horner evaluation."""
    out = np.zeros_like(P.coeffs[0])
    for C in P.coeffs[::-1]:
        out = out * z + C
    return out


@dataclass(frozen=True)
class BlockSplit:
    nw: np.ndarray
    ne: np.ndarray
    sw: np.ndarray
    se: np.ndarray

    @classmethod
    def of(cls, W: np.ndarray) -> "BlockSplit":
        q = W.shape[0] // 2
        return cls(W[:q, :q], W[:q, q:], W[q:, :q], W[q:, q:])

    def assemble(self) -> np.ndarray:
        return np.block([[self.nw, self.ne], [self.sw, self.se]])


def J_im(q: int) -> np.ndarray:
    I, O = np.eye(q), np.zeros((q, q))
    return np.block([[O, 1j * I], [-1j * I, O]])


def J_sig(p: int, q: int) -> np.ndarray:
    return np.block([[-np.eye(p), np.zeros((p, q))], [np.zeros((q, p)), np.eye(q)]]).astype(complex)


def _quad(q: int, blocks: dict) -> MatrixPoly2q:
    """Assemble a polynomial from ``{(row, col): [(poly, matrix), ...]}``.

    ``poly`` lists the scalar coefficients ``(c0, c1, c2)`` of a factor in z.
    """
    C = np.zeros((3, 2 * q, 2 * q), dtype=complex)
    for (r, c), terms in blocks.items():
        for poly, mat in terms:
            for n, cn in enumerate(poly):
                if cn:
                    C[n, r * q:(r + 1) * q, c * q:(c + 1) * q] += cn * mat
    return MatrixPoly2q(q, C)


STEP_KINDS = ("mft_M", "mfti_M", "mft_AM", "mfti_AM", "cfti_AM")


def step_polynomial(
    kind: str, M, A=None, alpha: float = -1.0, beta: float = 1.0, tol: Tolerance = DEFAULT_TOL,
    scale: float = 0.0,
) -> MatrixPoly2q:
    """One of the quadratic ``2q x 2q`` step polynomials, expanded in z.

    ``scale`` is passed to every pseudoinverse as an absolute reference.
    """
    M = ml.as_cmatrix(M, "M")
    q = M.shape[0]
    if M.shape != (q, q):
        raise ValueError("M must be square")
    if kind.endswith("AM"):
        if A is None:
            raise ValueError(f"{kind} needs the matrix A")
        A = ml.as_cmatrix(A, "A")
        if A.shape != M.shape:
            raise ValueError(f"A has shape {A.shape}, M has {M.shape}")
    elif kind not in STEP_KINDS:
        raise ValueError(f"unknown step polynomial {kind!r}")

    one, x, y = (1, 0, 0), (-alpha, 1, 0), (beta, -1, 0)
    yx = (-alpha * beta, alpha + beta, -1)
    delta = beta - alpha
    I = np.eye(q)
    Mp = ml.pinv(M, tol, scale)
    PrM, PrMs, PnM = M @ Mp, Mp @ M, I - Mp @ M

    def neg(p):
        return tuple(-c for c in p)

    if kind == "mft_M":
        b = {
            (0, 0): [(neg(y), PrM)],
            (0, 1): [(one, M)],
            (1, 0): [(neg(yx), Mp)],
            (1, 1): [(neg(y), PrMs), (one, -delta * PnM)],
        }
    elif kind == "mfti_M":
        b = {(0, 0): [(y, PrM)], (0, 1): [(one, M)], (1, 0): [(neg(yx), Mp)], (1, 1): [(y, I)]}
    else:
        Ap = ml.pinv(A, tol, scale)
        PnA = I - Ap @ A
        B = delta * M - A
        if kind == "mft_AM":
            b = {
                (0, 0): [(neg(y), A @ Mp)],
                (0, 1): [(one, A)],
                (1, 0): [(neg(yx), Ap)],
                (1, 1): [(neg(y), Ap @ M), (one, -PnA)],
            }
        elif kind == "mfti_AM":
            K = PnA @ Mp @ B
            b = {
                (0, 0): [(y, M @ Ap)],
                (0, 1): [(one, A + M @ K)],
                (1, 0): [(neg(yx), Ap)],
                (1, 1): [(y, delta * PnM + Mp @ A), (neg(x), K)],
            }
        else:
            Dp = ml.pinv(A @ Mp @ B, tol, scale)
            b = {
                (0, 0): [(y, M @ (Ap @ A) @ Mp @ B @ Dp), (x, M @ PnA @ Mp @ A @ Dp)],
                (0, 1): [(one, B)],
                (1, 0): [(neg(yx), Mp @ A @ Dp)],
                (1, 1): [(y, delta * PnM + Mp @ A)],
            }
    return _quad(q, b)


def resolvent_factors(
    s: MomentSequence, m: int, factorization: str = "V", tol: Tolerance = DEFAULT_TOL
) -> list:
    """The quadratic factors whose ordered product is the resolvent ``V_m``."""
    if not classify(s, tol).is_fgg:
        raise DomainError("resolvent: sequence is not Hausdorff nonnegative definite")
    if not 0 <= m <= s.m:
        raise ValueError(f"need 0 <= m <= {s.m}, got {m}")
    sc = s.scale()
    chain = transform_chain(s.truncate(m), tol, sc)
    al, be = s.alpha, s.beta
    a0 = [derived_sequences(chain[k]).a[0] for k in range(m)]
    if factorization == "V":
        facs = [step_polynomial("mfti_AM", chain[k][0], a0[k], al, be, tol, sc) for k in range(m)]
        facs.append(step_polynomial("mfti_M", chain[m][0], None, al, be, tol, sc))
    elif factorization == "U":
        facs = [step_polynomial("mfti_M", s[0], None, al, be, tol, sc)]
        facs += [step_polynomial("cfti_AM", chain[k][0], a0[k], al, be, tol, sc) for k in range(m)]
    else:
        raise ValueError(f"factorization must be 'V' or 'U', got {factorization!r}")
    return facs


def resolvent_polynomial(
    s: MomentSequence, m: int, factorization: str = "V", tol: Tolerance = DEFAULT_TOL
) -> MatrixPoly2q:
    facs = resolvent_factors(s, m, factorization, tol)
    out = facs[0]
    for f in facs[1:]:
        out = out @ f
    return out


def lft(W, P, Q, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """``(AP + BQ)(CP + DQ)^{-1}`` for ``W = [[A, B], [C, D]]``."""
    W = ml.as_cmatrix(W, "W")
    P = ml.as_cmatrix(P, "P")
    Q = ml.as_cmatrix(Q, "Q")
    if W.shape[0] != W.shape[1] or W.shape[0] % 2:
        raise ValueError("W must be square of even side")
    bs = BlockSplit.of(W)
    num = bs.nw @ P + bs.ne @ Q
    den = bs.sw @ P + bs.se @ Q
    sv = np.linalg.svd(den, compute_uv=False)
    ref = max(ml.norm(bs.sw) * ml.norm(P) + ml.norm(bs.se) * ml.norm(Q), 1e-300)
    if sv[-1] <= tol.rank_rtol * ref:
        raise SingularDenominator("singular LFT denominator")
    return np.linalg.solve(den.T, num.T).T
