"""Truncated matrix moment sequences on a compact interval [alpha, beta].

Covers the derived sequences a, b, c, block Hankel matrices, the
nonnegativity test, interval endpoints u, o and lengths d, the F-parameters,
canonical moments (with their inverse) and one-step extensions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import matlin as ml
from .matlin import DEFAULT_TOL, DomainError, Tolerance


@dataclass(frozen=True)
class MomentSequence:
    """Interval ``[alpha, beta]`` and moments ``s_0, ..., s_m`` (each q x q)."""

    alpha: float
    beta: float
    moments: tuple

    def __init__(self, alpha, beta, moments):
        alpha, beta = float(alpha), float(beta)
        if not (np.isfinite(alpha) and np.isfinite(beta) and alpha < beta):
            raise ValueError(f"need finite alpha < beta, got [{alpha}, {beta}]")
        mats = tuple(ml.as_cmatrix(s, f"s_{j}") for j, s in enumerate(moments))
        if not mats:
            raise ValueError("a moment sequence needs at least s_0")
        q = mats[0].shape[0]
        for j, s in enumerate(mats):
            if s.shape != (q, q):
                raise ValueError(f"s_{j} has shape {s.shape}, expected ({q}, {q})")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "moments", mats)

    @property
    def q(self) -> int:
        return self.moments[0].shape[0]

    @property
    def m(self) -> int:
        return len(self.moments) - 1

    @property
    def delta(self) -> float:
        return self.beta - self.alpha

    def __getitem__(self, j):
        return self.moments[j]

    def __len__(self):
        return len(self.moments)

    def truncate(self, m: int) -> "MomentSequence":
        return MomentSequence(self.alpha, self.beta, self.moments[: m + 1])

    def append(self, X) -> "MomentSequence":
        return MomentSequence(self.alpha, self.beta, self.moments + (X,))

    def scale(self) -> float:
        return max(1.0, max(ml.norm(s) for s in self.moments))


@dataclass(frozen=True)
class DerivedSequences:
    a: list
    b: list
    c: list


def derived_sequences(s: MomentSequence) -> DerivedSequences:
    al, be = s.alpha, s.beta
    S = s.moments
    a = [-al * S[j] + S[j + 1] for j in range(s.m)]
    b = [be * S[j] - S[j + 1] for j in range(s.m)]
    c = [-al * be * S[j] + (al + be) * S[j + 1] - S[j + 2] for j in range(s.m - 1)]
    return DerivedSequences(a, b, c)


def _hankel(seq: Sequence[np.ndarray], n: int, shift: int = 0) -> np.ndarray:
    if len(seq) < 2 * n + 1 + shift:
        raise ValueError(
            f"block Hankel of order {n} needs {2 * n + 1 + shift} terms, got {len(seq)}"
        )
    return np.block([[seq[j + k + shift] for k in range(n + 1)] for j in range(n + 1)])


HANKEL_KINDS = ("H", "K", "G", "Ha", "Hb", "Hc")


def block_hankel(s: MomentSequence, kind: str, n: int) -> np.ndarray:
    """Block Hankel matrix of order ``n`` (side ``(n+1)q``)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if kind in ("H", "K", "G"):
        return _hankel(s.moments, n, {"H": 0, "K": 1, "G": 2}[kind])
    if kind not in HANKEL_KINDS:
        raise ValueError(f"unknown Hankel kind {kind!r}")
    if s.m < 1:
        raise ValueError(f"{kind} needs at least two moments")
    der = derived_sequences(s)
    seq = {"Ha": der.a, "Hb": der.b, "Hc": der.c}[kind]
    return _hankel(seq, n)


def theta(seq: Sequence[np.ndarray], n: int, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """``z_{n,2n-1} H_{n-1}+ y_{n,2n-1}``, with ``Theta_0 = 0``."""
    q = seq[0].shape[0]
    if n == 0:
        return np.zeros((q, q), dtype=complex)
    H = _hankel(seq, n - 1)
    z = np.hstack([seq[j] for j in range(n, 2 * n)])
    y = np.vstack([seq[j] for j in range(n, 2 * n)])
    return z @ ml.pinv(H, tol) @ y


@dataclass(frozen=True)
class IntervalData:
    """Endpoints ``u_j, o_j`` of the admissible interval for ``s_{j+1}``.

    ``B_up[0]`` is ``None``: the upper Schur complement starts at index 1.
    """

    u: list
    o: list
    d: list
    A_low: list
    B_up: list
    mid: list


def interval_data(s: MomentSequence, tol: Tolerance = DEFAULT_TOL) -> IntervalData:
    al, be = s.alpha, s.beta
    S = s.moments
    der = derived_sequences(s)
    u, o = [], []
    for j in range(s.m + 1):
        k, odd = divmod(j, 2)
        if not odd:
            u.append(al * S[j] + theta(der.a, k, tol) if k else al * S[j])
            o.append(be * S[j] - theta(der.b, k, tol) if k else be * S[j])
        else:
            u.append(theta(S, k + 1, tol))
            tc = theta(der.c, k, tol) if k else 0
            o.append(-al * be * S[2 * k] + (al + be) * S[2 * k + 1] - tc)
    d = [o_ - u_ for u_, o_ in zip(u, o)]
    A_low = [S[0]] + [S[j] - u[j - 1] for j in range(1, s.m + 1)]
    B_up = [None] + [o[j - 1] - S[j] for j in range(1, s.m + 1)]
    mid = [(u_ + o_) / 2 for u_, o_ in zip(u, o)]
    return IntervalData(u, o, d, A_low, B_up, mid)


@dataclass(frozen=True)
class ClassificationReport:
    is_fgg: bool
    is_fgg_pd: bool
    is_completely_degenerate: bool
    rank_d: list
    in_D: bool
    hankel_margins: dict = field(default_factory=dict)
    d_margins: list = field(default_factory=list)


def _hankel_pair(s: MomentSequence) -> dict:
    m = s.m
    if m == 0:
        return {"H0": s[0]}
    n, odd = divmod(m, 2)
    if odd:
        return {f"Ha{n}": block_hankel(s, "Ha", n), f"Hb{n}": block_hankel(s, "Hb", n)}
    return {f"H{n}": block_hankel(s, "H", n), f"Hc{n - 1}": block_hankel(s, "Hc", n - 1)}


def classify(s: MomentSequence, tol: Tolerance = DEFAULT_TOL) -> ClassificationReport:
    """Decide Hausdorff nonnegativity and the degeneracy regime of ``s``."""
    mats = _hankel_pair(s)
    margins = {k: ml.psd_margin(v) for k, v in mats.items()}
    is_fgg = all(ml.is_psd(v, tol) for v in mats.values())
    iv = interval_data(s, tol)
    q = s.q
    rank_d = [ml.rank(d, tol, s.scale()) for d in iv.d]
    d_margins = []
    for d in iv.d:
        sv = np.linalg.svd(d, compute_uv=False)
        d_margins.append(float(sv[-1] / max(1.0, sv[0])))
    P0 = ml.projector(s[0], "range", tol)
    N0 = ml.projector(s[0], "null", tol)
    sc = s.scale()
    in_D = all(
        ml.norm(P0 @ sj - sj) <= 1e-8 * sc and ml.norm(sj @ N0) <= 1e-8 * sc
        for sj in s.moments
    )
    return ClassificationReport(
        is_fgg=is_fgg,
        is_fgg_pd=is_fgg and all(r == q for r in rank_d),
        is_completely_degenerate=is_fgg and rank_d[-1] == 0,
        rank_d=rank_d,
        in_D=in_D,
        hankel_margins=margins,
        d_margins=d_margins,
    )


def _require_fgg(s: MomentSequence, tol: Tolerance, what: str):
    if not classify(s, tol).is_fgg:
        raise DomainError(f"{what}: sequence is not Hausdorff nonnegative definite")


def f_params(s: MomentSequence, tol: Tolerance = DEFAULT_TOL) -> list:
    """``f_0 .. f_{2m}``: the Schur complements interleaved by index class."""
    iv = interval_data(s, tol)
    f = [s[0]]
    for j in range(1, s.m + 1):
        if j % 2:
            f += [iv.A_low[j], iv.B_up[j]]
        else:
            f += [iv.B_up[j], iv.A_low[j]]
    return f


@dataclass(frozen=True)
class CanonicalParams:
    alpha: float
    beta: float
    e: tuple

    def __init__(self, alpha, beta, e):
        alpha, beta = float(alpha), float(beta)
        if not alpha < beta:
            raise ValueError("need alpha < beta")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "e", tuple(ml.as_cmatrix(x, f"e_{j}") for j, x in enumerate(e)))

    @property
    def q(self) -> int:
        return self.e[0].shape[0]

    @property
    def m(self) -> int:
        return len(self.e) - 1


def canonical_moments(s: MomentSequence, tol: Tolerance = DEFAULT_TOL) -> CanonicalParams:
    """Matricial canonical moments ``e_0 .. e_m``."""
    _require_fgg(s, tol, "canonical_moments")
    iv = interval_data(s, tol)
    f = f_params(s, tol)
    e = [ml.herm(f[0])]
    for j in range(1, s.m + 1):
        dj = ml.psd_truncate(iv.d[j - 1], tol, s.scale())
        Dp = ml.pinv(ml.sqrt_psd(dj, tol), tol)
        ej = ml.herm(Dp @ f[2 * j] @ Dp)
        P = ml.projector(dj, "range", tol)
        if not (ml.is_psd(ej, tol) and ml.is_psd(P - ej, tol)):
            raise DomainError(f"canonical_moments: e_{j} leaves [0, P] at tolerance")
        e.append(ej)
    return CanonicalParams(s.alpha, s.beta, e)


def canonical_to_d(cp: CanonicalParams, tol: Tolerance = DEFAULT_TOL) -> list:
    """The d-recursion driven by canonical moments, validating each ``e_k``."""
    delta = cp.beta - cp.alpha
    if not ml.is_psd(cp.e[0], tol):
        raise DomainError("e_0 is not PSD")
    d = [delta * ml.herm(cp.e[0])]
    for k in range(1, cp.m + 1):
        ek = ml.herm(cp.e[k])
        P = ml.projector(d[k - 1], "range", tol)
        if not (ml.is_psd(ek, tol) and ml.is_psd(P - ek, tol)):
            raise DomainError(f"e_{k} is not between 0 and the range projector of d_{k - 1}")
        D = ml.sqrt_psd(d[k - 1], tol)
        E = ml.sqrt_psd(ek, tol)
        d.append(ml.herm(delta * D @ E @ (P - ek) @ E @ D))
    return d


def from_canonical(cp: CanonicalParams, tol: Tolerance = DEFAULT_TOL) -> MomentSequence:
    """Rebuild the moment sequence whose canonical moments are ``cp.e``."""
    d = canonical_to_d(cp, tol)
    s = MomentSequence(cp.alpha, cp.beta, [ml.herm(cp.e[0])])
    for j in range(1, cp.m + 1):
        D = ml.sqrt_psd(d[j - 1], tol)
        f_even = D @ ml.herm(cp.e[j]) @ D
        f_odd = d[j - 1] - f_even
        a_low = f_odd if j % 2 else f_even
        u_prev = interval_data(s, tol).u[j - 1]
        s = s.append(u_prev + a_low)
    return s


def extend(s: MomentSequence, mode: str, arg=None, tol: Tolerance = DEFAULT_TOL) -> MomentSequence:
    """Append ``s_{m+1}`` chosen inside the admissible matricial interval.

    ``mode`` is one of ``central``, ``lower``, ``upper``, ``subspace`` (``arg``
    is a q x k basis matrix, possibly with zero columns) or ``value``
    (``arg`` is the new moment).
    """
    _require_fgg(s, tol, "extend")
    iv = interval_data(s, tol)
    m = s.m
    if mode == "central":
        X = iv.mid[m]
    elif mode == "lower":
        X = iv.u[m]
    elif mode == "upper":
        X = iv.o[m]
    elif mode == "subspace":
        X = subspace_moment(s, arg, tol, iv)
    elif mode == "value":
        X = ml.as_cmatrix(arg, "X")
        if X.shape != (s.q, s.q):
            raise ValueError(f"value has shape {X.shape}, expected ({s.q}, {s.q})")
        lo = ml.loewner(iv.u[m], X, tol)
        hi = ml.loewner(X, iv.o[m], tol)
        if ml.hermitian_deviation(X) > tol.herm_atol or not (lo.a_le_b and hi.a_le_b):
            raise DomainError("value lies outside the matricial interval [u_m, o_m]")
    else:
        raise ValueError(f"unknown extension mode {mode!r}")
    return s.append(X)


def subspace_projector(U, d: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Projector onto span(U), checked to lie inside ran(d)."""
    q = d.shape[0]
    U = np.zeros((q, 0), dtype=complex) if U is None else np.asarray(U, dtype=complex)
    if U.ndim == 1:
        U = U.reshape(q, -1)
    if U.shape[0] != q:
        raise ValueError(f"subspace basis needs {q} rows, got {U.shape[0]}")
    PU = ml.projector(U, "range", tol) if U.shape[1] else np.zeros((q, q), dtype=complex)
    Pd = ml.projector(d, "range", tol)
    if ml.norm(Pd @ PU - PU) > 1e-7:
        raise DomainError("subspace is not contained in ran(d_m)")
    return PU


def subspace_moment(s: MomentSequence, U, tol: Tolerance = DEFAULT_TOL, iv=None) -> np.ndarray:
    iv = iv or interval_data(s, tol)
    m = s.m
    d = ml.psd_truncate(iv.d[m], tol, s.scale())
    PU = subspace_projector(U, d, tol)
    D = ml.sqrt_psd(d, tol)
    if m % 2 == 0:
        return iv.o[m] - D @ PU @ D
    return iv.u[m] + D @ PU @ D
