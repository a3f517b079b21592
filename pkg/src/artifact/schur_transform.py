"""The algebraic Schur algorithm on truncated moment sequences."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import matlin as ml
from .hausdorff_seq import (
    CanonicalParams,
    MomentSequence,
    canonical_moments,
    classify,
    derived_sequences,
)
from .matlin import DEFAULT_TOL, DomainError, Tolerance


def _mats(seq) -> list:
    return [ml.as_cmatrix(x) for x in seq]


def reciprocal(s: Sequence, tol: Tolerance = DEFAULT_TOL, scale: float = 0.0) -> list:
    """Reciprocal sequence: ``r_0 = s_0+``, ``r_j = -s_0+ sum_{l<j} s_{j-l} r_l``."""
    s = _mats(s)
    s0p = ml.pinv(s[0], tol, scale)
    r = [s0p]
    for j in range(1, len(s)):
        acc = sum(s[j - l] @ r[l] for l in range(j))
        r.append(-s0p @ acc)
    return r


def cauchy_product(s: Sequence, t: Sequence) -> list:
    s, t = _mats(s), _mats(t)
    if s and t and s[0].shape[1] != t[0].shape[0]:
        raise ValueError(f"inner dimensions differ: {s[0].shape} vs {t[0].shape}")
    n = min(len(s), len(t))
    return [sum(s[l] @ t[j - l] for l in range(j + 1)) for j in range(n)]


def b_modification(s: Sequence, beta: float) -> list:
    """``out_0 = -s_0``, ``out_j = beta s_{j-1} - s_j``."""
    s = _mats(s)
    return [-s[0]] + [beta * s[j - 1] - s[j] for j in range(1, len(s))]


def _one_step(s: MomentSequence, tol: Tolerance, scale: float) -> MomentSequence:
    der = derived_sequences(s)
    a, b = der.a, der.b
    x = cauchy_product(b, reciprocal(b_modification(a, s.beta), tol, scale))
    a0, s0p = a[0], ml.pinv(s[0], tol, scale)
    return MomentSequence(s.alpha, s.beta, [-a0 @ s0p @ xj @ a0 for xj in x])


def f_transform(s: MomentSequence, k: int, tol: Tolerance = DEFAULT_TOL, scale: float | None = None) -> MomentSequence:
    """The ``k``-th iterate of the one-step Schur transform (length drops by k).

    ``scale`` is the absolute reference for pseudoinverse cutoffs along the
    chain; it defaults to the scale of the input so that transforms of
    degenerate data, which are rounding noise, invert to zero.
    """
    if k < 0 or k > s.m:
        raise ValueError(f"need 0 <= k <= m = {s.m}, got {k}")
    return transform_chain(s.truncate(s.m), tol, scale)[k]


def transform_chain(s: MomentSequence, tol: Tolerance = DEFAULT_TOL, scale: float | None = None) -> list:
    """``[s^[0], s^[1], ..., s^[m]]``."""
    sc = s.scale() if scale is None else scale
    out = [s]
    for _ in range(s.m):
        out.append(_one_step(out[-1], tol, sc))
    return out


@dataclass(frozen=True)
class FixedPointReport:
    canonical_fixed: bool
    transform_fixed: bool
    canonical_residual: float
    transform_residual: float
    agree: bool


def fixed_point_check(s: MomentSequence, tol: Tolerance = DEFAULT_TOL, rtol: float = 1e-8) -> FixedPointReport:
    """Test both fixed-point criteria and report whether they agree."""
    if not classify(s, tol).is_fgg:
        raise DomainError("fixed_point_check: sequence is not Hausdorff nonnegative definite")
    scale = s.scale()
    e = canonical_moments(s, tol).e
    if s.m >= 1:
        P = ml.projector(s[0], "range", tol)
        e1 = e[1]
        res = ml.norm(e1 - e1 @ e1 - P / s.delta**2)
        res = max([res] + [ml.norm(e[j] - e1) for j in range(2, s.m + 1)])
    else:
        res = 0.0
    if s.m >= 1:
        t = f_transform(s, 1, tol)
        tres = max(ml.norm(t[j] - s[j]) for j in range(t.m + 1)) / scale
    else:
        tres = 0.0
    cf, tf = res <= rtol, tres <= rtol
    return FixedPointReport(cf, tf, float(res), float(tres), cf == tf)


def scalar_fixed_points(alpha: float, beta: float, M: float, length: int = 5) -> list:
    """All scalar fixed-point canonical sequences ``(M, e, e, ...)``."""
    if M < 0:
        raise ValueError("M must be nonnegative")
    delta = beta - alpha
    if M == 0:
        return [CanonicalParams(alpha, beta, [0.0] * length)]
    if delta < 2 and not np.isclose(delta, 2):
        return []
    if np.isclose(delta, 2):
        vals = [0.5]
    else:
        r = np.sqrt(delta**2 - 4) / (2 * delta)
        vals = [0.5 + r, 0.5 - r]
    return [CanonicalParams(alpha, beta, [M] + [v] * (length - 1)) for v in vals]
