"""Ground-truth oracles: molecular measures, the arcsine law, contour moments."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable

import numpy as np

from . import matlin as ml
from .hausdorff_seq import MomentSequence
from .matlin import DEFAULT_TOL, DomainError, Tolerance


@dataclass(frozen=True)
class MolecularMeasure:
    """Finitely many atoms ``(t_l, A_l)`` on ``[alpha, beta]`` with PSD weights."""

    alpha: float
    beta: float
    atoms: tuple

    def __init__(self, alpha, beta, atoms, tol: Tolerance = DEFAULT_TOL):
        alpha, beta = float(alpha), float(beta)
        if not alpha < beta:
            raise ValueError("need alpha < beta")
        clean = []
        for t, w in atoms:
            t = float(t)
            w = ml.as_cmatrix(w, "weight")
            if not alpha <= t <= beta:
                raise ValueError(f"atom {t} lies outside [{alpha}, {beta}]")
            if not ml.is_psd(w, tol):
                raise ValueError(f"weight at t={t} is not PSD")
            clean.append((t, w))
        if not clean:
            raise ValueError("a molecular measure needs at least one atom")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "atoms", tuple(clean))

    @property
    def q(self) -> int:
        return self.atoms[0][1].shape[0]


def moments(mu: MolecularMeasure, m: int) -> MomentSequence:
    """Power moments ``s_j = sum_l t_l^j A_l`` for ``j = 0..m``."""
    s = [sum(t**j * w for t, w in mu.atoms) for j in range(m + 1)]
    return MomentSequence(mu.alpha, mu.beta, s)


def _off_interval(z: complex, alpha: float, beta: float):
    z = complex(z)
    if z.imag == 0 and alpha <= z.real <= beta:
        raise DomainError(f"z = {z} lies on the interval [{alpha}, {beta}]")
    return z


def stieltjes_eval(mu: MolecularMeasure, z: complex) -> np.ndarray:
    """``sum_l A_l / (t_l - z)``."""
    z = _off_interval(z, mu.alpha, mu.beta)
    return sum(w / (t - z) for t, w in mu.atoms)


ARCSINE_MAX_M = 60


class Arcsine:
    """Arcsine distribution on ``[alpha, beta]`` (probability measure)."""

    def __init__(self, alpha: float, beta: float):
        if not alpha < beta:
            raise ValueError("need alpha < beta")
        self.alpha = float(alpha)
        self.beta = float(beta)

    def moments(self, m: int) -> MomentSequence:
        if m > ARCSINE_MAX_M:
            raise ValueError(f"arcsine moments are supported up to m={ARCSINE_MAX_M}")
        a, d = self.alpha, self.beta - self.alpha
        s = [
            sum(comb(j, k) * comb(2 * k, k) * 0.25**k * d**k * a ** (j - k) for k in range(j + 1))
            for j in range(m + 1)
        ]
        return MomentSequence(a, self.beta, s)

    def root(self, z: complex) -> complex:
        """The square root ``w`` of ``(z-alpha)(z-beta)`` picked by the disk rule."""
        z = _off_interval(z, self.alpha, self.beta)
        c = (self.alpha + self.beta) / 2
        w = np.sqrt((z - self.alpha) * (z - self.beta) + 0j)
        if abs(w - z + c) >= abs(-w - z + c):
            w = -w
        return complex(w)

    def transform(self, z: complex) -> complex:
        return -1 / self.root(z)

    __call__ = transform


def arcsine(alpha: float, beta: float) -> Arcsine:
    return Arcsine(alpha, beta)


@dataclass(frozen=True)
class ContourConfig:
    """Circle around the interval midpoint used for moment extraction."""

    radius_factor: float = 2.0
    nodes: int = 512
    max_nodes: int = 1 << 15
    agree_tol: float = 1e-10

    def __post_init__(self):
        if self.radius_factor <= 0:
            raise ValueError("radius_factor must be positive")
        if self.nodes < 64:
            raise ValueError("need at least 64 contour nodes")

    def circle(self, alpha: float, beta: float) -> tuple[float, float]:
        center = (alpha + beta) / 2
        radius = self.radius_factor * (beta - alpha) / 2 + 1
        return center, radius


def _contour_moments(F, m, alpha, beta, cfg: ContourConfig, n: int) -> list:
    c, r = cfg.circle(alpha, beta)
    theta = 2 * np.pi * np.arange(n) / n
    zs = c + r * np.exp(1j * theta)
    vals = [ml.as_cmatrix(F(z), "F(z)") for z in zs]
    vals = np.stack(vals)
    # s_j = -(1/2 pi i) \oint z^j F dz, dz = i (z - c) dtheta
    out = []
    for j in range(m + 1):
        w = zs**j * (zs - c)
        out.append(-np.tensordot(w, vals, axes=(0, 0)) / n)
    return out


def moments_from_transform(
    F: Callable[[complex], np.ndarray],
    m: int,
    alpha: float,
    beta: float,
    cfg: ContourConfig = ContourConfig(),
    adaptive: bool = True,
) -> MomentSequence:
    """Extract ``s_0..s_m`` from a Stieltjes transform by contour quadrature.

    The trapezoid rule on the circle is doubled until two consecutive
    estimates agree to ``cfg.agree_tol`` relative to the data scale.
    """
    n = cfg.nodes
    prev = _contour_moments(F, m, alpha, beta, cfg, n)
    while adaptive and n < cfg.max_nodes:
        n *= 2
        cur = _contour_moments(F, m, alpha, beta, cfg, n)
        scale = max(1.0, max(ml.norm(x) for x in cur))
        gap = max(ml.norm(a - b) for a, b in zip(prev, cur))
        prev = cur
        if gap <= cfg.agree_tol * scale:
            break
    return MomentSequence(alpha, beta, prev)


def random_psd(rng: np.random.Generator, q: int, rank: int | None = None) -> np.ndarray:
    k = q if rank is None else rank
    G = rng.standard_normal((k, q)) + 1j * rng.standard_normal((k, q))
    return G.conj().T @ G / max(k, 1)


def random_measure(
    q: int,
    atoms: int,
    seed: int,
    alpha: float = -1.0,
    beta: float = 1.0,
    weight_rank: int | None = None,
    endpoints: bool = False,
) -> MolecularMeasure:
    """Seeded molecular measure with uniform atoms and ``G*G`` weights."""
    rng = np.random.default_rng(seed)
    ts = rng.uniform(alpha, beta, atoms)
    if endpoints and atoms >= 2:
        ts[0], ts[1] = alpha, beta
    return MolecularMeasure(alpha, beta, [(t, random_psd(rng, q, weight_rank)) for t in ts])


def random_fgg_sequence(
    q: int, m: int, atoms: int, seed: int, alpha: float = -1.0, beta: float = 1.0, **kw
) -> tuple[MolecularMeasure, MomentSequence]:
    if atoms < 1:
        raise ValueError("need at least one atom")
    mu = random_measure(q, atoms, seed, alpha, beta, **kw)
    return mu, moments(mu, m)
