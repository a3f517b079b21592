import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial.chebyshev import chebgauss

from artifact import matlin as ml
from artifact.hausdorff_seq import classify
from artifact.measures import (
    Arcsine,
    ContourConfig,
    MolecularMeasure,
    moments,
    moments_from_transform,
    random_fgg_sequence,
    random_measure,
    stieltjes_eval,
)

INTERVALS = [(-1.0, 1.0), (0.0, 1.0), (-0.5, 2.0), (1.0, 4.0)]


def scal(seq):
    return [complex(x[0, 0]) for x in seq]


def chebyshev_oracle(al, be, f, n=200):
    """Arcsine expectation of ``f`` by Gauss-Chebyshev quadrature."""
    x, w = chebgauss(n)
    t = (al + be) / 2 + (be - al) / 2 * x
    return np.sum(w * f(t)) / np.pi


def test_moments_examples():
    mu = MolecularMeasure(-1, 1, [(0.0, np.eye(2))])
    s = moments(mu, 2)
    assert np.allclose(s[0], np.eye(2)) and np.allclose(s[1], 0) and np.allclose(s[2], 0)
    assert np.allclose(scal(moments(MolecularMeasure(-1, 1, [(-1.0, 1.0)]), 2).moments), [1, -1, 1])
    half = MolecularMeasure(-1, 1, [(-1.0, 0.5), (1.0, 0.5)])
    assert np.allclose(scal(moments(half, 2).moments), [1, 0, 1])


def test_measure_validation():
    with pytest.raises(ValueError):
        MolecularMeasure(-1, 1, [(2.0, 1.0)])
    with pytest.raises(ValueError):
        MolecularMeasure(-1, 1, [(0.0, -1.0)])


def test_stieltjes_examples():
    assert np.allclose(stieltjes_eval(MolecularMeasure(-1, 1, [(0.0, np.eye(2))]), 1j), 1j * np.eye(2))
    assert np.allclose(stieltjes_eval(MolecularMeasure(-1, 1, [(0.5, np.zeros((2, 2)))]), 1j), 0)
    assert np.isclose(stieltjes_eval(MolecularMeasure(-1, 1, [(1.0, 1.0)]), 2j)[0, 0], 1 / (1 - 2j))


def test_arcsine_moments_examples():
    assert np.allclose(scal(Arcsine(0, 1).moments(2).moments), [1, 0.5, 0.375])
    assert np.allclose(scal(Arcsine(-1, 1).moments(2).moments), [1, 0, 0.5])


@pytest.mark.parametrize("al, be", INTERVALS)
def test_arcsine_moments_match_quadrature(al, be):
    s = Arcsine(al, be).moments(10)
    for j in range(11):
        assert s[j][0, 0].real == pytest.approx(chebyshev_oracle(al, be, lambda t: t**j), rel=1e-12)


def test_arcsine_transform_hand_value():
    assert Arcsine(-1, 1)(2j) == pytest.approx(1j / np.sqrt(5), abs=1e-15)


@pytest.mark.parametrize("al, be", INTERVALS)
def test_arcsine_transform_matches_quadrature(al, be):
    psi = Arcsine(al, be)
    rng = np.random.default_rng(0)
    c, h = (al + be) / 2, (be - al) / 2
    for _ in range(10):
        z = c + h * complex(rng.uniform(-2, 2), rng.choice([-1, 1]) * rng.uniform(0.3, 2))
        assert psi(z) == pytest.approx(chebyshev_oracle(al, be, lambda t: 1 / (t - z), n=4000), abs=1e-10)


@pytest.mark.parametrize(
    "F, m, want",
    [
        (lambda z: np.array([[-1 / z]]), 2, [1, 0, 0]),
        (lambda z: np.array([[1 / (1 - z)]]), 1, [1, 1]),
        (lambda z: np.zeros((1, 1)), 3, [0, 0, 0, 0]),
    ],
)
def test_moments_from_transform_examples(F, m, want):
    assert np.allclose(scal(moments_from_transform(F, m, -1, 1).moments), want, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 6))
def test_oracle_triangle(seed, q, atoms):
    al, be = INTERVALS[seed % 4]
    mu = random_measure(q, atoms, seed, al, be, endpoints=bool(seed % 2))
    want = moments(mu, 5)
    got = moments_from_transform(lambda z: stieltjes_eval(mu, z), 5, al, be)
    assert max(ml.norm(a - b) for a, b in zip(got.moments, want.moments)) <= 1e-9 * want.scale()


def test_quadrature_self_convergence():
    mu = random_measure(2, 5, 3, 1.0, 4.0)
    F = lambda z: stieltjes_eval(mu, z)
    a = moments_from_transform(F, 4, 1, 4, ContourConfig(nodes=512), adaptive=False)
    b = moments_from_transform(F, 4, 1, 4, ContourConfig(nodes=1024), adaptive=False)
    assert max(ml.norm(x - y) for x, y in zip(a.moments, b.moments)) <= 1e-10 * a.scale()


def test_contour_config_validation():
    with pytest.raises(ValueError):
        ContourConfig(radius_factor=0)
    with pytest.raises(ValueError):
        ContourConfig(nodes=8)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(0, 4), st.integers(1, 8))
def test_random_sequences_are_members(seed, q, m, atoms):
    mu, s = random_fgg_sequence(q, m, atoms, seed, *INTERVALS[seed % 4])
    assert classify(s).is_fgg
    _, s2 = random_fgg_sequence(q, m, atoms, seed, *INTERVALS[seed % 4])
    assert all(np.array_equal(a, b) for a, b in zip(s.moments, s2.moments))
