"""Parameter pairs, the LFT solution map and the special solutions.

Every solution of the truncated problem for ``s_0..s_m`` is
``F = (nw P + ne Q)(sw P + se Q)^{-1}`` with the blocks of the resolvent
``V_m(z)`` and an admissible pair ``(P, Q)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import matlin as ml
from .hausdorff_seq import MomentSequence, classify, derived_sequences, interval_data
from .matlin import DEFAULT_TOL, DomainError, Tolerance
from .measures import Arcsine, _off_interval
from .resolvent import (
    BlockSplit,
    MatrixPoly2q,
    SingularDenominator,
    lft,
    resolvent_polynomial,
    step_polynomial,
)

PAIR_CATALOG = ("zero_one", "stieltjes_constant", "projection", "subspace", "central", "reduced")
MAX_RETRIES = 3


@dataclass(frozen=True)
class ParameterPair:
    """A catalog pair ``z -> (P(z), Q(z))`` of ``q x q`` matrices.

    ``spec`` is the plain description the pair was built from; it is kept so
    the pair can be serialized and rebuilt.
    """

    catalog: str
    q: int
    fn: Callable = field(repr=False)
    spec: dict = field(default_factory=dict, repr=False)

    def __call__(self, z: complex) -> tuple[np.ndarray, np.ndarray]:
        return self.fn(complex(z))


def _context(s: MomentSequence | None, m: int | None, catalog: str) -> tuple[MomentSequence, int]:
    if s is None:
        raise ValueError(f"pair {catalog!r} needs a moment sequence context")
    m = s.m if m is None else int(m)
    if not 0 <= m <= s.m:
        raise ValueError(f"need 0 <= m <= {s.m}, got {m}")
    return s.truncate(m), m


def _dm(s: MomentSequence, m: int, tol: Tolerance) -> np.ndarray:
    """``d_m`` with sub-threshold eigenvalues zeroed against the data scale."""
    return ml.psd_truncate(interval_data(s.truncate(m), tol).d[m], tol, s.scale())


def _range_split(d: np.ndarray, tol: Tolerance, scale: float) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases of ran d and its complement, ranked against ``scale``."""
    U, _, _ = np.linalg.svd(d)
    r = ml.rank(d, tol, scale)
    return U[:, :r], U[:, r:]


def _basis(U, q: int) -> np.ndarray:
    if U is None:
        return np.zeros((q, 0), dtype=complex)
    U = np.asarray(U, dtype=complex)
    if U.ndim == 1:
        U = U.reshape(q, -1)
    if U.shape[0] != q:
        raise ValueError(f"subspace basis needs {q} rows, got {U.shape[0]}")
    return U


def _subspace_proj(U, q: int, tol: Tolerance) -> np.ndarray:
    U = _basis(U, q)
    if U.shape[1] == 0:
        return np.zeros((q, q), dtype=complex)
    return ml.projector(U, "range", tol)


def _scalar_fn(v) -> Callable:
    if callable(v):
        return v
    c = complex(v)
    return lambda z: c


def make_pair(
    spec: dict, s: MomentSequence | None = None, m: int | None = None, q: int | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> ParameterPair:
    """Build a catalog pair.

    Parameters
    ----------
    spec : dict
        ``{"catalog": name, ...}`` with the catalog-specific fields:

        - ``zero_one``: none
        - ``stieltjes_constant``: ``X``, ``Y`` and ``variant`` (``h`` or ``g``)
        - ``projection``: ``M``, ``U`` (basis), scalars or callables ``f``, ``g``
        - ``subspace``: ``U`` (basis of a subspace of ran d_m, may be empty)
        - ``central``: none
        - ``reduced``: ``inner`` (spec of an r x r pair), optional unitary ``W``
    s, m
        Sequence context, needed by ``subspace``, ``central`` and ``reduced``.
    q
        Size for context-free pairs when it cannot be inferred.
    """
    cat = spec.get("catalog")
    if cat not in PAIR_CATALOG:
        raise ValueError(f"unknown pair catalog {cat!r}; expected one of {PAIR_CATALOG}")
    if q is None and s is not None:
        q = s.q
    al = s.alpha if s is not None else spec.get("alpha", -1.0)
    be = s.beta if s is not None else spec.get("beta", 1.0)

    if cat == "zero_one":
        if q is None:
            raise ValueError("zero_one needs q or a sequence context")
        I, O = np.eye(q, dtype=complex), np.zeros((q, q), dtype=complex)
        return ParameterPair(cat, q, lambda z: (O, I), dict(spec))

    if cat == "stieltjes_constant":
        X = ml.as_cmatrix(spec["X"], "X")
        Y = ml.as_cmatrix(spec["Y"], "Y")
        variant = spec.get("variant", "h")
        if X.shape != Y.shape or X.shape[0] != X.shape[1]:
            raise ValueError("X and Y must be square of equal size")
        if variant not in ("h", "g"):
            raise ValueError(f"variant must be 'h' or 'g', got {variant!r}")
        if ml.rank(np.vstack([X, Y]), tol) != X.shape[0]:
            raise DomainError("stieltjes_constant: rank [X; Y] must equal q")
        if not ml.is_psd(Y.conj().T @ X, tol):
            raise DomainError("stieltjes_constant: Y*X is not PSD")
        if variant == "h":
            fn = lambda z: (X, (be - z) * Y)
        else:
            fn = lambda z: (-X, (z - al) * Y)
        return ParameterPair(cat, X.shape[0], fn, dict(spec))

    if cat == "projection":
        M = ml.as_cmatrix(spec["M"], "M")
        qq = M.shape[0]
        PU = _subspace_proj(spec.get("U"), qq, tol)
        f, g = _scalar_fn(spec.get("f", 1.0)), _scalar_fn(spec.get("g", 1.0))
        P0 = M @ PU @ M
        Q0 = np.eye(qq) - ml.pinv(M, tol) @ PU @ M
        return ParameterPair(cat, qq, lambda z: (f(z) * P0, g(z) * Q0), dict(spec))

    s, m = _context(s, m, cat)
    q = s.q
    delta = s.delta
    d = _dm(s, m, tol)
    D = ml.sqrt_psd(d, tol)
    Dp = ml.pinv(D, tol)
    I = np.eye(q, dtype=complex)

    if cat == "subspace":
        PU = _subspace_proj(spec.get("U"), q, tol)
        if ml.norm(ml.projector(d, "range", tol) @ PU - PU) > 1e-7:
            raise DomainError("subspace is not contained in ran(d_m)")
        P0 = delta ** (m - 1) * D @ PU @ D
        Q0 = I - Dp @ PU @ D
        return ParameterPair(cat, q, lambda z: (P0, (be - z) * Q0), dict(spec))

    if cat == "central":
        psi = Arcsine(al, be)
        Pr = ml.projector(d, "range", tol)
        Pn = I - Pr

        def fn(z):
            p = psi(z)
            X = delta ** (m - 1) * ((be - z) * p - 1) * d
            Y = (be - z) * ((z - al) * p + 1) * Pr + delta * Pn
            return X, Y

        return ParameterPair(cat, q, fn, dict(spec))

    # reduced
    Ub, Vb = _range_split(d, tol, s.scale())
    r = Ub.shape[1]
    if not 1 <= r <= q - 1:
        raise DomainError(f"reduced pair needs 1 <= rank d_m <= q-1, got rank {r}")
    if spec.get("W") is not None:
        W = ml.as_cmatrix(spec["W"], "W")
        if W.shape != (q, q) or ml.norm(W.conj().T @ W - I) > 1e-8:
            raise DomainError("W must be a q x q unitary matrix")
        if ml.norm(Ub @ Ub.conj().T - W[:, :r] @ W[:, :r].conj().T) > 1e-7:
            raise DomainError("leading r columns of W must span ran(d_m)")
    else:
        W = np.hstack([Ub, Vb])
    inner = spec.get("inner", {"catalog": "zero_one"})
    inner = inner if isinstance(inner, ParameterPair) else make_pair(dict(inner, alpha=al, beta=be), q=r, tol=tol)
    if inner.q != r:
        raise ValueError(f"inner pair has size {inner.q}, expected {r}")
    Zr = np.zeros((q - r, r), dtype=complex)

    def fn(z):
        g1, g2 = inner(z)
        P = W @ np.block([[g1, Zr.T], [Zr, np.zeros((q - r, q - r))]])
        Q = W @ np.block([[g2, Zr.T], [Zr, np.eye(q - r)]])
        return P, Q

    return ParameterPair(cat, q, fn, dict(spec))


def lifted_reduced_pair(pair: ParameterPair, s: MomentSequence, m: int, tol: Tolerance = DEFAULT_TOL) -> ParameterPair:
    """``(U g1 U*, U g2 U* + P_perp)`` for the inner pair of a reduced pair."""
    s, m = _context(s, m, "reduced")
    d = _dm(s, m, tol)
    W = pair.spec.get("W")
    if W is None:
        Ub, Vb = _range_split(d, tol, s.scale())
    else:
        W = ml.as_cmatrix(W)
        r = ml.rank(d, tol, s.scale())
        Ub, Vb = W[:, :r], W[:, r:]
    inner = pair.spec.get("inner", {"catalog": "zero_one"})
    inner = inner if isinstance(inner, ParameterPair) else make_pair(
        dict(inner, alpha=s.alpha, beta=s.beta), q=Ub.shape[1], tol=tol)
    Pp = Vb @ Vb.conj().T

    def fn(z):
        g1, g2 = inner(z)
        return Ub @ g1 @ Ub.conj().T, Ub @ g2 @ Ub.conj().T + Pp

    return ParameterPair("reduced_lifted", s.q, fn, {})


@dataclass(frozen=True)
class AdmissibilityReport:
    passed: bool
    rank_ok: bool
    imag_h_ok: bool
    imag_g_ok: bool
    range_ok: bool
    min_rank: int
    worst_imag_h: float
    worst_imag_g: float
    worst_range_residual: float
    points: int
    # sampled checks can only certify the grid, never the exceptional set
    verdict: str = ""


def _im(A: np.ndarray) -> np.ndarray:
    return (A - A.conj().T) / 2j


def check_pair_admissible(
    pair: ParameterPair, s: MomentSequence, m: int | None, grid, tol: Tolerance = DEFAULT_TOL,
    rtol: float = 1e-8,
) -> AdmissibilityReport:
    """Sample the admissibility conditions of a pair on ``grid``."""
    s, m = _context(s, m, pair.catalog)
    al, be = s.alpha, s.beta
    Pd = ml.projector(_dm(s, m, tol), "range", tol)
    min_rank, wh, wg, wr = pair.q, np.inf, np.inf, 0.0
    for z in grid:
        z = _off_interval(z, al, be)
        P, Q = pair(z)
        min_rank = min(min_rank, ml.rank(np.vstack([P, Q]), tol))
        wr = max(wr, ml.norm(Pd @ P - P) / (1 + ml.norm(P)))
        if z.imag != 0:
            QP = Q.conj().T @ P
            wh = min(wh, ml.psd_margin(_im((z - al) * QP) / z.imag))
            wg = min(wg, ml.psd_margin(_im((be - z) * QP) / z.imag))
    rank_ok = min_rank == pair.q
    h_ok, g_ok, r_ok = wh >= -rtol, wg >= -rtol, wr <= rtol
    passed = rank_ok and h_ok and g_ok and r_ok
    verdict = "no violation found on grid" if passed else "violation found on grid"
    return AdmissibilityReport(
        passed, rank_ok, h_ok, g_ok, r_ok, int(min_rank), float(wh), float(wg), float(wr),
        len(list(grid)), verdict,
    )


@dataclass(frozen=True)
class SolutionFn:
    """A solution ``z -> F(z)`` tied to its sequence context."""

    s: MomentSequence
    m: int
    tag: str
    V: MatrixPoly2q = field(repr=False)
    pair: ParameterPair | None = field(default=None, repr=False)
    tol: Tolerance = field(default=DEFAULT_TOL, repr=False)

    @property
    def q(self) -> int:
        return self.s.q

    def __call__(self, z: complex) -> np.ndarray:
        z0 = _off_interval(z, self.s.alpha, self.s.beta)
        eps = 1e-6 * (1 + abs(z0))
        z = z0
        for k in range(MAX_RETRIES + 1):
            try:
                return self._eval(z)
            except SingularDenominator:
                if k == MAX_RETRIES:
                    raise
                # the exception set is discrete, so a nearby point works
                z = z + eps * 1j
        raise AssertionError("unreachable")

    def _eval(self, z: complex) -> np.ndarray:
        W = self.V(z)
        if self.pair is None:
            bs = BlockSplit.of(W)
            return lft(W, np.zeros_like(bs.nw), np.eye(self.q), self.tol)
        P, Q = self.pair(z)
        return lft(W, P, Q, self.tol)


def solution(s: MomentSequence, m: int, pair: ParameterPair | None, tol: Tolerance = DEFAULT_TOL,
             tag: str = "pair") -> SolutionFn:
    """The solution function for ``(s_0..s_m)`` and an admissible pair."""
    if not 0 <= m <= s.m:
        raise ValueError(f"need 0 <= m <= {s.m}, got {m}")
    s = s.truncate(m)
    if not classify(s, tol).is_fgg:
        raise DomainError("solve: sequence is not Hausdorff nonnegative definite")
    if pair is not None and pair.q != s.q:
        raise ValueError(f"pair has size {pair.q}, sequence has q={s.q}")
    return SolutionFn(s, m, tag, resolvent_polynomial(s, m, "V", tol), pair, tol)


def solve(s: MomentSequence, m: int, pair: ParameterPair, z: complex, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """``F(z)`` for the pair; singular points are re-sampled at ``z + eps i``."""
    return solution(s, m, pair, tol)(z)


def solve_degenerate_unique(s: MomentSequence, tol: Tolerance = DEFAULT_TOL) -> SolutionFn:
    """The unique solution ``ne se^{-1}`` when ``d_m = 0``."""
    rep = classify(s, tol)
    if not rep.is_completely_degenerate:
        raise DomainError("solve_degenerate_unique: d_m is not zero")
    return solution(s, s.m, None, tol, tag="unique")


def extremal(s: MomentSequence, which: str, tol: Tolerance = DEFAULT_TOL) -> SolutionFn:
    """Lower or upper extremal solution (moment ``s_{m+1}`` equal to u_m or o_m)."""
    if which not in ("lower", "upper"):
        raise ValueError(f"which must be 'lower' or 'upper', got {which!r}")
    if not classify(s, tol).is_fgg:
        raise DomainError("extremal: sequence is not Hausdorff nonnegative definite")
    d = _dm(s, s.m, tol)
    Ub, _ = _range_split(d, tol, s.scale())
    full = (which == "lower") == (s.m % 2 == 0)
    U = Ub if full else np.zeros((s.q, 0), dtype=complex)
    pair = make_pair({"catalog": "subspace", "U": U}, s, s.m, tol=tol)
    return solution(s, s.m, pair, tol, tag=which)


def central(s: MomentSequence, tol: Tolerance = DEFAULT_TOL) -> SolutionFn:
    """The central solution, continuing the moments by interval midpoints."""
    rep = classify(s, tol)
    if not rep.is_fgg:
        raise DomainError("central: sequence is not Hausdorff nonnegative definite")
    m = s.m
    if rep.rank_d[m] == s.q:
        # nondegenerate d_m: the equivalent pair (delta^{m-1} psi d_m, I)
        d = _dm(s, m, tol)
        psi = Arcsine(s.alpha, s.beta)
        I = np.eye(s.q, dtype=complex)
        c = s.delta ** (m - 1)
        pair = ParameterPair("central", s.q, lambda z: (c * psi(z) * d, I), {"catalog": "central"})
    else:
        pair = make_pair({"catalog": "central"}, s, m, tol=tol)
    return solution(s, m, pair, tol, tag="central")


SPECIAL = ("central", "lower", "upper", "unique")


def special(s: MomentSequence, which: str, tol: Tolerance = DEFAULT_TOL) -> SolutionFn:
    if which == "central":
        return central(s, tol)
    if which in ("lower", "upper"):
        return extremal(s, which, tol)
    if which == "unique":
        return solve_degenerate_unique(s, tol)
    raise ValueError(f"unknown special solution {which!r}; expected one of {SPECIAL}")


# elementary Schur steps, evaluated pointwise


def forward_first(F, M, z: complex, alpha: float, beta: float, tol: Tolerance = DEFAULT_TOL):
    """``(G1, G2)`` of the first-kind step for the value ``F(z)``."""
    F, M = ml.as_cmatrix(F, "F"), ml.as_cmatrix(M, "M")
    Mp = ml.pinv(M, tol)
    I = np.eye(M.shape[0])
    G1 = (beta - z) * F - M
    G2 = (beta - z) * ((z - alpha) * Mp @ F + Mp @ M) + (beta - alpha) * (I - Mp @ M)
    return G1, G2


def inverse_first(G1, G2, M, z: complex, alpha: float, beta: float, tol: Tolerance = DEFAULT_TOL):
    """``F1 F2^{-1}`` from a pair value ``(G1, G2)``."""
    W = step_polynomial("mfti_M", M, None, alpha, beta, tol)(z)
    return _guarded_lft(W, G1, G2, tol)


def forward_later(F, A, M, z: complex, alpha: float, beta: float, tol: Tolerance = DEFAULT_TOL):
    """``A M+ [(beta-z)F - M] ((beta-z)[(z-alpha)F + M])+ A``."""
    F, A, M = ml.as_cmatrix(F, "F"), ml.as_cmatrix(A, "A"), ml.as_cmatrix(M, "M")
    L = A @ ml.pinv(M, tol) @ ((beta - z) * F - M)
    R = ml.pinv((beta - z) * ((z - alpha) * F + M), tol)
    return L @ R @ A


def inverse_later(G, A, M, z: complex, alpha: float, beta: float, tol: Tolerance = DEFAULT_TOL):
    """``F1 F2^{-1}`` with ``[F1; F2] = mfti_AM(z) [G; I]``."""
    G = ml.as_cmatrix(G, "G")
    W = step_polynomial("mfti_AM", M, A, alpha, beta, tol)(z)
    return _guarded_lft(W, G, np.eye(G.shape[0]), tol)


def _guarded_lft(W, P, Q, tol):
    try:
        return lft(W, P, Q, tol)
    except SingularDenominator as exc:
        raise DomainError(f"inverse step: singular denominator, input is not admissible ({exc})") from exc


def schur_step(direction: str, kind: str, z: complex, alpha: float, beta: float,
               tol: Tolerance = DEFAULT_TOL, **inputs):
    """Dispatch to the four pointwise step maps.

    ``inputs`` carries ``F`` or ``G`` (or ``G1``, ``G2``) plus ``M`` and, for
    the later kind, ``A``.
    """
    z = _off_interval(z, alpha, beta)
    if (direction, kind) == ("forward", "first"):
        return forward_first(inputs["F"], inputs["M"], z, alpha, beta, tol)
    if (direction, kind) == ("inverse", "first"):
        return inverse_first(inputs["G1"], inputs["G2"], inputs["M"], z, alpha, beta, tol)
    if (direction, kind) == ("forward", "later"):
        return forward_later(inputs["F"], inputs["A"], inputs["M"], z, alpha, beta, tol)
    if (direction, kind) == ("inverse", "later"):
        return inverse_later(inputs["G"], inputs["A"], inputs["M"], z, alpha, beta, tol)
    raise ValueError(f"unknown step {direction}/{kind}")


def later_step_data(s: MomentSequence) -> tuple[np.ndarray, np.ndarray]:
    """``(A, M) = (a_0, s_0)`` for the later-kind step of a sequence with m >= 1."""
    if s.m < 1:
        raise ValueError("the later-kind step needs m >= 1")
    return derived_sequences(s).a[0], s[0]


@dataclass(frozen=True)
class MembershipReport:
    passed: bool
    worst_imag: float
    worst_left: float
    worst_right: float
    points: int


def default_grid(alpha: float, beta: float, n: int = 8, seed: int = 0) -> list:
    """Points in both half-planes and on both real rays off the interval."""
    rng = np.random.default_rng(seed)
    c, h = (alpha + beta) / 2, (beta - alpha) / 2
    pts = [c + h * (rng.uniform(-2, 2) + 1j * rng.uniform(0.1, 2)) for _ in range(n)]
    pts += [np.conj(p) for p in pts]
    pts += [alpha - h * rng.uniform(0.1, 2) for _ in range(n)]
    pts += [beta + h * rng.uniform(0.1, 2) for _ in range(n)]
    return [complex(p) for p in pts]


def check_rab_membership(F: Callable, grid, alpha: float, beta: float, rtol: float = 1e-8) -> MembershipReport:
    """Sample the class conditions: Im F / Im z PSD, Re F PSD left, -Re F PSD right."""
    wi = wl = wr = np.inf
    n = 0
    for z in grid:
        z = _off_interval(z, alpha, beta)
        V = ml.as_cmatrix(F(z), "F(z)")
        n += 1
        if z.imag != 0:
            wi = min(wi, ml.psd_margin(_im(V) / z.imag))
        elif z.real < alpha:
            wl = min(wl, ml.psd_margin(ml.herm(V)))
        else:
            wr = min(wr, ml.psd_margin(-ml.herm(V)))
    passed = all(w >= -rtol for w in (wi, wl, wr))
    return MembershipReport(passed, float(wi), float(wl), float(wr), n)
