"""Seeded invariant suite run by ``artifact verify``.

Each check draws its own instances from a seed and returns the worst
residual it saw; a check passes when that residual is at most its threshold.
Count-valued checks (misclassifications, rank mismatches) use threshold 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import matlin as ml
from .hausdorff_seq import (
    CanonicalParams,
    MomentSequence,
    block_hankel,
    canonical_moments,
    classify,
    derived_sequences,
    extend,
    f_params,
    from_canonical,
    interval_data,
)
from .matlin import DEFAULT_TOL, Tolerance
from .measures import (
    Arcsine,
    ContourConfig,
    moments,
    moments_from_transform,
    random_fgg_sequence,
    random_measure,
    random_psd,
    stieltjes_eval,
)
from .resolvent import BlockSplit, J_im, lft, resolvent_polynomial, step_polynomial
from .schur_transform import cauchy_product, reciprocal, transform_chain
from . import solutions as so

INTERVALS = ((-1.0, 1.0), (0.0, 1.0), (-0.5, 2.0), (1.0, 4.0))
REGIMES = ("nondegenerate", "few_atoms", "rank_one")


@dataclass(frozen=True)
class Ctx:
    seed: int
    trials: int
    tol: Tolerance = DEFAULT_TOL
    contour: ContourConfig = ContourConfig()


@dataclass(frozen=True)
class Check:
    name: str
    module: str
    threshold: float
    fn: Callable[[Ctx], float]


@dataclass(frozen=True)
class CheckResult:
    name: str
    module: str
    worst: float
    threshold: float
    passed: bool
    error: str = ""


REGISTRY: list[Check] = []


def check(name: str, module: str, threshold: float):
    def deco(fn):
        REGISTRY.append(Check(name, module, threshold, fn))
        return fn

    return deco


def instance(seed: int, i: int, regime: str | None = None, m: int | None = None, q: int | None = None):
    """Deterministic Fgg instance number ``i``; regimes cycle unless fixed."""
    q = q or 1 + i % 3
    m = m if m is not None else 1 + i % 4
    regime = regime or REGIMES[i % 3]
    al, be = INTERVALS[(i // 3) % len(INTERVALS)]
    if regime == "nondegenerate":
        kw = dict(atoms=(m + 2) * q)
    elif regime == "few_atoms":
        kw = dict(atoms=max(1, (m + 1) // 2))
    else:
        kw = dict(atoms=m + 1, weight_rank=1)
    return random_fgg_sequence(q, m, seed=seed * 1000 + i, alpha=al, beta=be, **kw)


def _rel(a, b) -> float:
    return ml.norm(np.asarray(a) - np.asarray(b)) / (1 + ml.norm(b))


def _rand_matrix(rng, r, c, rank=None):
    G = rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))
    if rank is not None and rank < min(r, c):
        G = G[:, :rank] @ (rng.standard_normal((rank, c)) + 1j * rng.standard_normal((rank, c)))
    return G


def _rand_z(rng, al, be, n):
    c, h = (al + be) / 2, (be - al) / 2
    return [complex(c + h * rng.uniform(-2, 2), h * rng.uniform(0.05, 2) * rng.choice([-1, 1])) for _ in range(n)]


# matlin


@check("penrose", "matlin", 1e-8)
def _penrose(ctx):
    rng = np.random.default_rng(ctx.seed)
    worst = 0.0
    for i in range(ctx.trials):
        r, c = rng.integers(1, 9, 2)
        A = _rand_matrix(rng, r, c, rank=int(rng.integers(0, min(r, c) + 1)) if i % 2 else None)
        X = ml.pinv(A, ctx.tol)
        s = 1 + ml.norm(A)
        res = [A @ X @ A - A, X @ A @ X - X, (A @ X).conj().T - A @ X, (X @ A).conj().T - X @ A]
        worst = max(worst, max(ml.norm(R) for R in res) / s)
    return worst


@check("pinv_involution", "matlin", 1e-8)
def _pinv_inv(ctx):
    rng = np.random.default_rng(ctx.seed + 1)
    worst = 0.0
    for _ in range(ctx.trials):
        r, c = rng.integers(1, 9, 2)
        A = _rand_matrix(rng, r, c)
        X = ml.pinv(A, ctx.tol)
        worst = max(worst, _rel(ml.pinv(X, ctx.tol), A), _rel(ml.pinv(A.conj().T, ctx.tol), X.conj().T))
    return worst


@check("pinv_sqrt_commute", "matlin", 1e-7)
def _pinv_sqrt(ctx):
    rng = np.random.default_rng(ctx.seed + 2)
    worst = 0.0
    for _ in range(ctx.trials):
        q = int(rng.integers(1, 6))
        A = random_psd(rng, q, int(rng.integers(1, q + 1)))
        X = ml.pinv(A, ctx.tol)
        if not ml.is_psd(X, ctx.tol):
            return np.inf
        worst = max(worst, _rel(ml.sqrt_psd(X, ctx.tol), ml.pinv(ml.sqrt_psd(A, ctx.tol), ctx.tol)))
    return worst


@check("parallel_sum_symmetry", "matlin", 1e-8)
def _psum(ctx):
    rng = np.random.default_rng(ctx.seed + 3)
    worst = 0.0
    for _ in range(ctx.trials):
        q = int(rng.integers(1, 6))
        A, B = random_psd(rng, q, int(rng.integers(1, q + 1))), random_psd(rng, q, int(rng.integers(1, q + 1)))
        worst = max(worst, _rel(ml.parallel_sum(A, B, ctx.tol), ml.parallel_sum(B, A, ctx.tol)))
    return worst


@check("projector_properties", "matlin", 0)
def _proj(ctx):
    rng = np.random.default_rng(ctx.seed + 4)
    bad = 0
    for _ in range(ctx.trials):
        r, c = rng.integers(1, 9, 2)
        A = _rand_matrix(rng, r, c, rank=int(rng.integers(0, min(r, c) + 1)))
        rk = ml.rank(A, ctx.tol)
        want = {"range": rk, "null": c - rk, "range_adjoint": rk, "null_adjoint": r - rk}
        for kind, k in want.items():
            P = ml.projector(A, kind, ctx.tol)
            ok = ml.norm(P @ P - P) <= 1e-8 and ml.norm(P - P.conj().T) <= 1e-8
            bad += int(not ok or ml.rank(P, ctx.tol, 1.0) != k)
    return bad


# hausdorff_seq


def _members(ctx, offset=0, **kw):
    for i in range(ctx.trials):
        yield instance(ctx.seed + offset, i, **kw)[1]


@check("ab_sum", "hausdorff_seq", 1e-10)
def _absum(ctx):
    worst = 0.0
    for s in _members(ctx):
        der = derived_sequences(s)
        worst = max(worst, max(ml.norm(s.delta * s[j] - der.a[j] - der.b[j]) / s.scale() for j in range(s.m)))
    return worst


@check("d_and_f_psd", "hausdorff_seq", 0)
def _dfpsd(ctx):
    bad = 0
    for s in _members(ctx):
        bad += sum(not ml.is_psd(d, ctx.tol) for d in interval_data(s, ctx.tol).d)
        bad += sum(not ml.is_psd(f, ctx.tol) for f in f_params(s, ctx.tol))
    return bad


@check("d_parallel_sum", "hausdorff_seq", 1e-7)
def _p1422(ctx):
    worst = 0.0
    for s in _members(ctx):
        iv = interval_data(s, ctx.tol)
        r = [ml.norm(iv.d[0] - s.delta * iv.A_low[0])]
        r += [ml.norm(iv.d[k] - s.delta * ml.parallel_sum(iv.A_low[k], iv.B_up[k], ctx.tol)) for k in range(1, s.m + 1)]
        worst = max(worst, max(r) / s.scale())
    return worst


def _ranks(s, ctx):
    iv = interval_data(s, ctx.tol)
    sc = s.scale()
    return iv, [ml.rank(d, ctx.tol, sc) for d in iv.d], sc


@check("rank_pairs", "hausdorff_seq", 0)
def _r0938(ctx):
    bad = 0
    for s in _members(ctx):
        iv, rd, sc = _ranks(s, ctx)
        for j in range(1, s.m + 1):
            lhs = rd[j - 1] + rd[j]
            rhs = ml.rank(iv.A_low[j], ctx.tol, sc) + ml.rank(iv.B_up[j], ctx.tol, sc)
            bad += int(lhs != rhs)
    return bad


@check("rank_sums_hankel", "hausdorff_seq", 0)
def _r0929(ctx):
    bad = 0
    for s in _members(ctx):
        _, rd, sc = _ranks(s, ctx)
        bad += int(rd[0] != ml.rank(s[0], ctx.tol, sc))
        for j in range(1, s.m + 1):
            n, odd = divmod(j, 2)
            if odd:
                rh = ml.rank(block_hankel(s, "Ha", n), ctx.tol, sc) + ml.rank(block_hankel(s, "Hb", n), ctx.tol, sc)
            else:
                rh = ml.rank(block_hankel(s, "H", n), ctx.tol, sc) + ml.rank(block_hankel(s, "Hc", n - 1), ctx.tol, sc)
            bad += int(sum(rd[: j + 1]) != rh)
    return bad


@check("det_products", "hausdorff_seq", 1e-6)
def _dhdia(ctx):
    worst = 0.0
    for s in _members(ctx, regime="nondegenerate"):
        iv = interval_data(s, ctx.tol)
        dets = [np.linalg.det(d) for d in iv.d]
        q, dl = s.q, s.delta
        for j in range(s.m + 1):
            n, odd = divmod(j, 2)
            if j == 0:
                rhs = dl**q * np.linalg.det(s[0])
            elif odd:
                rhs = dl ** ((n + 1) * q) * np.linalg.det(block_hankel(s, "Ha", n)) * np.linalg.det(block_hankel(s, "Hb", n))
            else:
                rhs = dl ** ((n + 1) * q) * np.linalg.det(block_hankel(s, "H", n)) * np.linalg.det(block_hankel(s, "Hc", n - 1))
            lhs = np.prod(dets[: j + 1])
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst


@check("f_pairs_sum_to_d", "hausdorff_seq", 1e-12)
def _f2n1(ctx):
    worst = 0.0
    for s in _members(ctx):
        f, d = f_params(s, ctx.tol), interval_data(s, ctx.tol).d
        worst = max([worst] + [ml.norm(f[2 * k - 1] + f[2 * k] - d[k - 1]) / s.scale() for k in range(1, s.m + 1)])
    return worst


@check("f_class_law", "hausdorff_seq", 1e-7)
def _classlaw(ctx):
    worst = 0.0
    for s in _members(ctx):
        f, dl = f_params(s, ctx.tol), s.delta
        r = [ml.norm(dl * f[0] - f[1] - f[2])] if s.m >= 1 else []
        r += [ml.norm(dl * ml.parallel_sum(f[2 * k - 1], f[2 * k], ctx.tol) - f[2 * k + 1] - f[2 * k + 2]) for k in range(1, s.m)]
        worst = max([worst] + [x / s.scale() for x in r])
    return worst


@check("canonical_round_trip", "hausdorff_seq", 1e-7)
def _canon(ctx):
    worst = 0.0
    for s in _members(ctx, regime="nondegenerate"):
        cp = canonical_moments(s, ctx.tol)
        back = from_canonical(cp, ctx.tol)
        worst = max(worst, max(ml.norm(a - b) for a, b in zip(back.moments, s.moments)) / s.scale())
        cp2 = canonical_moments(back, ctx.tol)
        worst = max(worst, max(ml.norm(a - b) for a, b in zip(cp.e, cp2.e)) / max(1.0, ml.norm(cp.e[0])))
    return worst


@check("interval_membership", "hausdorff_seq", 0)
def _t112(ctx):
    rng = np.random.default_rng(ctx.seed + 5)
    bad = 0
    for s in _members(ctx, regime="nondegenerate"):
        iv = interval_data(s, ctx.tol)
        u, d = iv.u[s.m], iv.d[s.m]
        H = rng.standard_normal((s.q, s.q)) + 1j * rng.standard_normal((s.q, s.q))
        L = ml.sqrt_psd(d, ctx.tol)
        V = L @ ml.pinv(L) @ (H @ H.conj().T) @ ml.pinv(L) @ L
        inside = u + L @ (0.1 * np.eye(s.q) + 0.8 * V / max(1.0, ml.norm(V))) @ L
        sign = 1 if rng.random() < 0.5 else -1
        outside = (iv.o[s.m] if sign > 0 else u) + sign * 1e-3 * ml.norm(d) * np.eye(s.q)
        bad += int(not classify(s.append(ml.herm(inside)), ctx.tol).is_fgg)
        bad += int(classify(s.append(outside), ctx.tol).is_fgg)
    return bad


@check("lambda_extension", "hausdorff_seq", 1e-7)
def _r1011(ctx):
    worst = 0.0
    for s in _members(ctx):
        iv = interval_data(s, ctx.tol)
        m, d = s.m, iv.d[s.m]
        for lam in (0.0, 0.25, 0.5, 1.0):
            t = s.append(iv.u[m] + lam * d)
            jv = interval_data(t, ctx.tol)
            r = max(
                ml.norm(jv.A_low[m + 1] - lam * d),
                ml.norm(jv.B_up[m + 1] - (1 - lam) * d),
                ml.norm(jv.d[m + 1] - s.delta * lam * (1 - lam) * d),
            )
            worst = max(worst, r / s.scale())
    return worst


# schur_transform


@check("transform_preserves_membership", "schur_transform", 0)
def _p1030(ctx):
    bad = 0
    for s in _members(ctx):
        bad += sum(not classify(t, ctx.tol).is_fgg for t in transform_chain(s, ctx.tol))
    return bad


def _transform_case(ctx, fn):
    worst = 0.0
    for s in _members(ctx, m=4, regime="nondegenerate"):
        worst = max(worst, fn(s) / s.scale() ** 2)
    return worst


@check("f_params_after_transform", "schur_transform", 1e-7)
def _salg1(ctx):
    def fn(s):
        f, g, dl = f_params(s, ctx.tol), f_params(transform_chain(s, ctx.tol)[1], ctx.tol), s.delta
        r = [ml.norm(g[0] - dl * ml.parallel_sum(f[1], f[2], ctx.tol))]
        return max(r + [ml.norm(g[j] - dl * f[j + 2]) for j in range(1, len(g))])

    return _transform_case(ctx, fn)


@check("first_moment_is_d", "schur_transform", 1e-7)
def _diaft(ctx):
    def fn(s):
        ch, d = transform_chain(s, ctx.tol), interval_data(s, ctx.tol).d
        return max(ml.norm(ch[k][0] - s.delta ** (k - 1) * d[k]) for k in range(1, s.m + 1))

    return _transform_case(ctx, fn)


@check("d_after_transform", "schur_transform", 1e-7)
def _diaalg(ctx):
    def fn(s):
        ch, d = transform_chain(s, ctx.tol), interval_data(s, ctx.tol).d
        return max(
            ml.norm(interval_data(ch[k], ctx.tol).d[j] - s.delta**k * d[k + j])
            for k in range(1, s.m + 1) for j in range(s.m - k + 1)
        )

    return _transform_case(ctx, fn)


@check("canonical_shift", "schur_transform", 1e-7)
def _salgip(ctx):
    def fn(s):
        ch, d, e = transform_chain(s, ctx.tol), interval_data(s, ctx.tol).d, canonical_moments(s, ctx.tol).e
        r = []
        for k in range(1, s.m + 1):
            p = canonical_moments(ch[k], ctx.tol).e
            r.append(ml.norm(p[0] - s.delta ** (k - 1) * d[k]))
            r += [ml.norm(p[j] - e[k + j]) for j in range(1, s.m - k + 1)]
        return max(r)

    return _transform_case(ctx, fn)


@check("f_from_transforms", "schur_transform", 1e-7)
def _fpft(ctx):
    def fn(s):
        ch, f = transform_chain(s, ctx.tol), f_params(s, ctx.tol)
        r = [0.0]
        for k in range(0, s.m // 2 + 1):
            if 2 * k + 1 > s.m or 2 * k >= len(ch) or ch[2 * k].m < 1:
                continue
            der = derived_sequences(ch[2 * k])
            r.append(ml.norm(f[4 * k + 1] - s.delta ** (-2 * k) * der.a[0]))
            r.append(ml.norm(f[4 * k + 2] - s.delta ** (-2 * k) * der.b[0]))
        return max(r)

    return _transform_case(ctx, fn)


@check("reciprocal_product", "schur_transform", 1e-8)
def _recip(ctx):
    worst = 0.0
    for s in _members(ctx):
        x = cauchy_product(s.moments, reciprocal(s.moments, ctx.tol))
        P0 = s[0] @ ml.pinv(s[0], ctx.tol)
        worst = max([worst, ml.norm(x[0] - P0)] + [ml.norm(xj) / s.scale() ** 2 for xj in x[1:]])
    return worst


@check("arcsine_fixed_point", "schur_transform", 1e-9)
def _arcfix(ctx):
    s = Arcsine(-1, 1).moments(6)
    t = transform_chain(s, ctx.tol)[1]
    return max(ml.norm(t[j] - s[j]) for j in range(t.m + 1))


# measures


@check("oracle_triangle", "measures", 1e-9)
def _triangle(ctx):
    worst = 0.0
    for i in range(ctx.trials):
        al, be = INTERVALS[i % len(INTERVALS)]
        mu = random_measure(1 + i % 3, 1 + i % 6, ctx.seed * 1000 + i, al, be, endpoints=bool(i % 2))
        s = moments(mu, 4)
        got = moments_from_transform(lambda z: stieltjes_eval(mu, z), 4, al, be, ctx.contour)
        worst = max(worst, max(ml.norm(a - b) for a, b in zip(got.moments, s.moments)) / s.scale())
    return worst


@check("quadrature_self_convergence", "measures", 1e-10)
def _selfconv(ctx):
    worst = 0.0
    for i in range(ctx.trials):
        al, be = INTERVALS[i % len(INTERVALS)]
        mu = random_measure(1 + i % 3, 1 + i % 6, ctx.seed * 1000 + i, al, be)
        F = lambda z: stieltjes_eval(mu, z)
        a = moments_from_transform(F, 4, al, be, ContourConfig(nodes=512), adaptive=False)
        b = moments_from_transform(F, 4, al, be, ContourConfig(nodes=1024), adaptive=False)
        worst = max(worst, max(ml.norm(x - y) for x, y in zip(a.moments, b.moments)) / a.scale())
    return worst


@check("arcsine_transform", "measures", 1e-8)
def _arcsine(ctx):
    worst = 0.0
    for al, be in INTERVALS:
        psi = Arcsine(al, be)
        got = moments_from_transform(psi, 6, al, be, ctx.contour)
        want = psi.moments(6)
        worst = max(worst, max(ml.norm(a - b) for a, b in zip(got.moments, want.moments)) / want.scale())
        rep = so.check_rab_membership(psi, so.default_grid(al, be, 10, ctx.seed), al, be)
        if not rep.passed:
            return np.inf
    return worst


@check("branch_rule", "measures", 0)
def _branch(ctx):
    rng = np.random.default_rng(ctx.seed + 6)
    bad = 0
    for al, be in INTERVALS:
        psi = Arcsine(al, be)
        c, h = (al + be) / 2, (be - al) / 2
        zs = c + h * (rng.uniform(-3, 3, 2500) + 1j * rng.uniform(-3, 3, 2500))
        for z in zs:
            if z.imag == 0:
                continue
            w = psi.root(z)
            quad = abs(w * w - (z - al) * (z - be)) <= 1e-9 * (1 + abs(z) ** 2)
            disk = abs(w - z + c) < h
            sign = (-1 / w).imag * z.imag >= 0
            bad += int(not (quad and disk and sign))
    return bad


@check("measure_transform_mass", "measures", 1e-7)
def _mdealg(ctx):
    worst = 0.0
    for i in range(ctx.trials):
        mu, s = instance(ctx.seed, i, regime="nondegenerate", m=3)
        ch, d = transform_chain(s, ctx.tol), interval_data(s, ctx.tol).d
        worst = max([worst] + [ml.norm(ch[k][0] - s.delta ** (k - 1) * d[k]) / s.scale() for k in range(1, s.m + 1)])
    return worst


# resolvent


def _herm_psd_pair(rng, q):
    M = random_psd(rng, q, int(rng.integers(1, q + 1)))
    H = rng.standard_normal((q, q)) + 1j * rng.standard_normal((q, q))
    A = M @ (H + H.conj().T) @ M  # Hermitian with ran A inside ran M
    return M, A


@check("step_inverse_product", "resolvent", 1e-8)
def _l1403(ctx):
    rng = np.random.default_rng(ctx.seed + 7)
    worst = 0.0
    for i in range(ctx.trials):
        q = 1 + i % 3
        al, be = INTERVALS[i % len(INTERVALS)]
        H = rng.standard_normal((q, q)) + 1j * rng.standard_normal((q, q))
        M = H + H.conj().T if i % 2 else random_psd(rng, q, int(rng.integers(1, q + 1)))
        W, V = step_polynomial("mft_M", M, None, al, be, ctx.tol), step_polynomial("mfti_M", M, None, al, be, ctx.tol)
        P = ml.projector(M, "range", ctx.tol)
        for z in _rand_z(rng, al, be, 20):
            T = -(be - z) * (be - al) * np.block([[P, 0 * P], [0 * P, np.eye(q)]])
            worst = max(worst, _rel(W(z) @ V(z), T), _rel(V(z) @ W(z), T))
    return worst


@check("factor_exchange", "resolvent", 1e-8)
def _r1443(ctx):
    rng = np.random.default_rng(ctx.seed + 8)
    worst = 0.0
    for i in range(ctx.trials):
        q = 1 + i % 3
        al, be = INTERVALS[i % len(INTERVALS)]
        M, A = _herm_psd_pair(rng, q)
        D = A @ ml.pinv(M, ctx.tol) @ ((be - al) * M - A)
        polys = [step_polynomial(k, X, Y, al, be, ctx.tol) for k, X, Y in
                 (("mfti_AM", M, A), ("mfti_M", D, None), ("mfti_M", M, None), ("cfti_AM", M, A))]
        for z in _rand_z(rng, al, be, 20):
            L = polys[0](z) @ polys[1](z)
            worst = max(worst, _rel(L, polys[2](z) @ polys[3](z)))
    return worst


def jform_expected(M, z, al, be, ell, inverse, tol=DEFAULT_TOL):
    """Closed form of ``W* J W`` for the scaled step factors ``diag(c I, I) W``."""
    q = M.shape[0]
    x, y = z - al, be - z
    yx, dl, im = y * x, be - al, z.imag
    sg = 1 if inverse else -1
    Mp = ml.pinv(M, tol)
    P, O = M @ Mp, np.zeros((q, q))

    def blk(a, b, c, d):
        return np.block([[a, b], [c, d]])

    if ell == 0:
        return blk(2 * sg * abs(y) ** 2 * im * Mp, 1j * (np.conj(yx) + abs(y) ** 2) * P,
                   -1j * (yx + abs(y) ** 2) * P, 2 * sg * im * M)
    if ell == 1:
        return dl * blk(O, 1j * np.conj(yx) * P, -1j * yx * P, 2 * sg * im * M)
    if ell == 2:
        return dl * abs(y) ** 2 * blk(2 * sg * im * Mp, 1j * P, -1j * P, O)
    return abs(y) ** 2 * blk(2 * sg * abs(x) ** 2 * im * Mp, 1j * (np.conj(yx) + abs(x) ** 2) * P,
                             -1j * (yx + abs(x) ** 2) * P, 2 * sg * im * M)


@check("signature_forms", "resolvent", 1e-8)
def _jforms(ctx):
    rng = np.random.default_rng(ctx.seed + 9)
    worst = 0.0
    for i in range(ctx.trials):
        q = 1 + i % 3
        al, be = INTERVALS[i % len(INTERVALS)]
        H = rng.standard_normal((q, q)) + 1j * rng.standard_normal((q, q))
        M = H + H.conj().T
        J = J_im(q)
        for z in _rand_z(rng, al, be, 5):
            scal = [1, z - al, be - z, (be - z) * (z - al)]
            for inverse, kind in ((False, "mft_M"), (True, "mfti_M")):
                W0 = step_polynomial(kind, M, None, al, be, ctx.tol)(z)
                for ell in range(4):
                    W = np.diag([scal[ell]] * q + [1] * q) @ W0
                    E = jform_expected(M, z, al, be, ell, inverse, ctx.tol)
                    worst = max(worst, _rel(W.conj().T @ J @ W, E))
    return worst


@check("lft_composition", "resolvent", 1e-8)
def _glt(ctx):
    rng = np.random.default_rng(ctx.seed + 10)
    worst = 0.0
    for i in range(ctx.trials):
        q = 1 + i % 3
        W1, W2 = _rand_matrix(rng, 2 * q, 2 * q), _rand_matrix(rng, 2 * q, 2 * q)
        P, Q = _rand_matrix(rng, q, q), _rand_matrix(rng, q, q)
        inner = lft(W1, P, Q, ctx.tol)
        worst = max(worst, _rel(lft(W2 @ W1, P, Q, ctx.tol), lft(W2, inner, np.eye(q), ctx.tol)))
    return worst


@check("resolvent_factorizations", "resolvent", 1e-7)
def _vu(ctx):
    worst = 0.0
    for s in _members(ctx):
        V = resolvent_polynomial(s, s.m, "V", ctx.tol)
        U = resolvent_polynomial(s, s.m, "U", ctx.tol)
        if V.degree > 2 * (s.m + 1):
            return np.inf
        n = max(len(V.coeffs), len(U.coeffs))
        pad = lambda c: np.concatenate([c, np.zeros((n - len(c),) + c.shape[1:])])
        cv, cu = pad(V.coeffs), pad(U.coeffs)
        worst = max(worst, max(ml.norm(a - b) for a, b in zip(cv, cu)) / max(ml.norm(c) for c in cv))
    return worst


@check("later_factor_blocks", "resolvent", 1e-7)
def _l1652(ctx):
    worst = 0.0
    for s in _members(ctx, regime="nondegenerate"):
        al, be, dl, q = s.alpha, s.beta, s.delta, s.q
        f, d, ch = f_params(s, ctx.tol), interval_data(s, ctx.tol).d, transform_chain(s, ctx.tol)
        p, I = (lambda X: ml.pinv(X, ctx.tol)), np.eye(q)
        z = complex(be + 0.5, 0.7)
        for k in range(s.m):
            A = derived_sequences(ch[k]).a[0]
            bs = BlockSplit.of(step_polynomial("cfti_AM", ch[k][0], A, al, be, ctx.tol)(z))
            f1, f2 = f[2 * k + 1], f[2 * k + 2]
            U11 = d[k] @ ((be - z) * p(f1) @ f1 @ p(d[k]) @ f2 + (z - al) * (I - p(f1) @ f1) @ p(d[k]) @ f1) @ p(d[k + 1])
            U21 = -(be - z) * (z - al) * dl ** (1 - k) * p(d[k]) @ f1 @ p(d[k + 1])
            U22 = (be - z) * dl * ((I - p(d[k]) @ d[k]) + p(d[k]) @ f1)
            r = max(_rel(bs.nw, U11), _rel(bs.ne, dl**k * f2), _rel(bs.sw, U21), _rel(bs.se, U22))
            worst = max(worst, r)
    return worst


# solutions


def catalog_pairs(s: MomentSequence, m: int, tol: Tolerance = DEFAULT_TOL) -> dict:
    """The acceptance catalog: zero_one, two Stieltjes constants, one subspace, central."""
    d = so._dm(s, m, tol)
    Ub, _ = so._range_split(d, tol, s.scale())
    q = s.q
    specs = {
        "zero_one": {"catalog": "zero_one"},
        "stieltjes_h": {"catalog": "stieltjes_constant", "X": d, "Y": np.eye(q), "variant": "h"},
        "stieltjes_g": {"catalog": "stieltjes_constant", "X": ml.projector(d, "range", tol),
                        "Y": 2 * np.eye(q), "variant": "g"},
        "subspace": {"catalog": "subspace", "U": Ub[:, :1]},
        "central": {"catalog": "central"},
    }
    return {k: so.make_pair(v, s, m, tol=tol) for k, v in specs.items()}


def _moment_gap(F, s, n, ctx, start=0):
    got = moments_from_transform(F, n, s.alpha, s.beta, ctx.contour)
    return got, max(ml.norm(got[j] - s[j]) for j in range(start, s.m + 1)) / s.scale()


@check("moment_reproduction", "solutions", 1e-6)
def _repro(ctx):
    worst = 0.0
    for s in _members(ctx):
        for pair in catalog_pairs(s, s.m, ctx.tol).values():
            worst = max(worst, _moment_gap(so.solution(s, s.m, pair, ctx.tol), s, s.m, ctx)[1])
    return worst


@check("regime_consistency", "solutions", 1e-8)
def _regimes(ctx):
    worst = 0.0
    grid = None
    for s in _members(ctx):
        rep = classify(s, ctx.tol)
        grid = so.default_grid(s.alpha, s.beta, 4, ctx.seed)
        pairs = catalog_pairs(s, s.m, ctx.tol)
        if rep.rank_d[-1] == s.q:
            for name in ("zero_one", "stieltjes_h", "stieltjes_g"):
                if not so.check_pair_admissible(pairs[name], s, s.m, grid, ctx.tol).passed:
                    return np.inf
        if rep.is_completely_degenerate:
            uni = so.solve_degenerate_unique(s, ctx.tol)
            for pair in pairs.values():
                F = so.solution(s, s.m, pair, ctx.tol)
                worst = max([worst] + [_rel(F(z), uni(z)) for z in grid[:6]])
    return worst


@check("reduced_pair_equivalence", "solutions", 1e-8)
def _reduced(ctx):
    rng = np.random.default_rng(ctx.seed + 11)
    worst = 0.0
    for s in _members(ctx, regime="rank_one", q=3):
        d = so._dm(s, s.m, ctx.tol)
        r = ml.rank(d, ctx.tol, s.scale())
        if not 1 <= r <= s.q - 1:
            continue
        Ub, Vb = so._range_split(d, ctx.tol, s.scale())
        inner = {"catalog": "stieltjes_constant", "X": np.eye(r), "Y": np.eye(r), "variant": "h"}
        rp = so.make_pair({"catalog": "reduced", "inner": inner}, s, s.m, tol=ctx.tol)
        lp = so.lifted_reduced_pair(rp, s, s.m, ctx.tol)
        # another orthonormal basis of the same splitting
        W2 = np.hstack([Ub[:, rng.permutation(r)], Vb[:, rng.permutation(s.q - r)]])
        rp2 = so.make_pair({"catalog": "reduced", "inner": inner, "W": W2}, s, s.m, tol=ctx.tol)
        F1, F2, F3 = (so.solution(s, s.m, p, ctx.tol) for p in (rp, lp, rp2))
        for z in _rand_z(rng, s.alpha, s.beta, 5):
            worst = max(worst, _rel(F1(z), F2(z)), _rel(F3(z), F2(z)))
    return worst


@check("extremal_extensions", "solutions", 1e-6)
def _extremal(ctx):
    worst = 0.0
    for s in _members(ctx):
        iv = interval_data(s, ctx.tol)
        for which, target in (("lower", iv.u[s.m]), ("upper", iv.o[s.m])):
            got, gap = _moment_gap(so.extremal(s, which, ctx.tol), s, s.m + 1, ctx)
            worst = max(worst, gap, ml.norm(got[s.m + 1] - target) / s.scale())
    return worst


@check("subspace_extension", "solutions", 1e-6)
def _subext(ctx):
    worst = 0.0
    for s in _members(ctx):
        pair = catalog_pairs(s, s.m, ctx.tol)["subspace"]
        U = pair.spec["U"]
        got, _ = _moment_gap(so.solution(s, s.m, pair, ctx.tol), s, s.m + 1, ctx)
        worst = max(worst, ml.norm(got[s.m + 1] - extend(s, "subspace", U, ctx.tol)[s.m + 1]) / s.scale())
    return worst


@check("central_midpoints", "solutions", 1e-6)
def _central(ctx):
    worst = 0.0
    for s in _members(ctx):
        t = s
        for _ in range(3):
            t = extend(t, "central", tol=ctx.tol)
        got = moments_from_transform(so.central(s, ctx.tol), s.m + 3, s.alpha, s.beta, ctx.contour)
        worst = max(worst, max(ml.norm(got[j] - t[j]) for j in range(s.m + 4)) / t.scale())
    return worst


@check("central_fixed_point", "solutions", 1e-7)
def _central_fix(ctx):
    rng = np.random.default_rng(ctx.seed + 12)
    worst = 0.0
    for c in (0.0, 1.5, -3.0):
        al, be = c - 1, c + 1
        s = MomentSequence(al, be, [1.0])
        F = so.central(s, ctx.tol)
        for z in _rand_z(rng, al, be, 10):
            G1, G2 = so.forward_first(F(z), s[0], z, al, be, ctx.tol)
            worst = max(worst, _rel(G1 @ np.linalg.inv(G2), F(z)))
    return worst


@check("nested_solution_sets", "solutions", 1e-6)
def _nested(ctx):
    worst = 0.0
    for s in _members(ctx):
        F = so.central(s, ctx.tol)
        if not so.check_rab_membership(F, so.default_grid(s.alpha, s.beta, 6, ctx.seed), s.alpha, s.beta).passed:
            return np.inf
        worst = max(worst, _moment_gap(F, s.truncate(max(s.m - 1, 0)), s.m, ctx)[1])
    return worst


@check("step_round_trips", "solutions", 1e-9)
def _steps(ctx):
    rng = np.random.default_rng(ctx.seed + 13)
    worst = 0.0
    for i in range(ctx.trials):
        mu, s = instance(ctx.seed, i)
        al, be = s.alpha, s.beta
        M, A = s[0], derived_sequences(s).a[0]
        for z in _rand_z(rng, al, be, 20):
            Fz = stieltjes_eval(mu, z)
            G1, G2 = so.forward_first(Fz, M, z, al, be, ctx.tol)
            worst = max(worst, _rel(so.inverse_first(G1, G2, M, z, al, be, ctx.tol), Fz))
            G = so.forward_later(Fz, A, M, z, al, be, ctx.tol)
            F2 = so.inverse_later(G, A, M, z, al, be, ctx.tol)
            worst = max(worst, _rel(F2, Fz), _rel(so.forward_later(F2, A, M, z, al, be, ctx.tol), G))
    return worst


MODULES = ("matlin", "hausdorff_seq", "schur_transform", "resolvent", "solutions", "measures")


def run_checks(seed: int = 7, trials: int = 50, tol: Tolerance = DEFAULT_TOL,
               contour: ContourConfig = ContourConfig(), names=None) -> list[CheckResult]:
    """Run the registry (or the named subset) and return one result per check."""
    ctx = Ctx(seed, trials, tol, contour)
    out = []
    for c in REGISTRY:
        if names and c.name not in names and c.module not in names:
            continue
        err = ""
        try:
            worst = float(c.fn(ctx))
        except (ValueError, np.linalg.LinAlgError) as exc:  # a crash is a failed check
            worst, err = np.inf, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(c.name, c.module, worst, c.threshold, bool(worst <= c.threshold), err))
    return out
