import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact import matlin as ml
from artifact.hausdorff_seq import MomentSequence
from artifact.matlin import DomainError
from artifact.measures import random_fgg_sequence, random_psd
from artifact.resolvent import (
    BlockSplit,
    J_im,
    MatrixPoly2q,
    SingularDenominator,
    eval_matrix_poly,
    lft,
    resolvent_factors,
    resolvent_polynomial,
    step_polynomial,
)

INTERVALS = [(-1.0, 1.0), (0.0, 1.0), (-0.5, 2.0), (1.0, 4.0)]


def mfti_M_direct(M, z, al, be):
    """Block formula substituted at one point."""
    Mp = np.linalg.pinv(M)
    I = np.eye(M.shape[0])
    y, x = be - z, z - al
    return np.block([[y * M @ Mp, M], [-y * x * Mp, y * I]])


def test_mfti_M_example_at_zero():
    W = step_polynomial("mfti_M", [[1.0]], None, -1, 1)(0)
    assert np.allclose(W, [[1, 1], [-1, 1]])


def test_mfti_M_example_at_2i():
    z = 2j
    W = step_polynomial("mfti_M", [[1.0]], None, -1, 1)(z)
    assert np.allclose(W, [[1 - z, 1], [-(1 - z) * (z + 1), 1 - z]])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.complex_numbers(max_magnitude=5, allow_nan=False))
def test_mfti_M_matches_block_formula(seed, q, z):
    al, be = INTERVALS[seed % 4]
    M = random_psd(np.random.default_rng(seed), q)
    assert np.allclose(step_polynomial("mfti_M", M, None, al, be)(z), mfti_M_direct(M, z, al, be), atol=1e-8)


def test_cfti_AM_with_B_zero():
    al, be = -1.0, 2.0
    M = np.diag([2.0, 1.0])
    A = (be - al) * M
    P = step_polynomial("cfti_AM", M, A, al, be)
    for z in (0.3j, 1 + 1j, -2.0):
        want = (be - al) * np.block([[np.zeros((2, 2)), np.zeros((2, 2))], [np.zeros((2, 2)), (be - z) * np.eye(2)]])
        assert np.allclose(P(z), want)


def test_mfti_AM_with_A_zero():
    al, be = 0.0, 1.5
    M = np.diag([1.0, 0.0])
    P = step_polynomial("mfti_AM", M, np.zeros((2, 2)), al, be)
    Mp = np.linalg.pinv(M)
    for z in (0.5j, 2 - 1j):
        want = (be - al) * np.block([[np.zeros((2, 2)), M], [np.zeros((2, 2)), (be - z) * np.eye(2) - (be - al) * Mp @ M]])
        assert np.allclose(P(z), want)


def test_step_polynomial_errors():
    with pytest.raises(ValueError):
        step_polynomial("mft_AM", np.eye(2))
    with pytest.raises(ValueError):
        step_polynomial("bogus", np.eye(2))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.complex_numbers(max_magnitude=4, allow_nan=False))
def test_first_kind_steps_invert_up_to_scalar(seed, q, z):
    rng = np.random.default_rng(seed)
    al, be = INTERVALS[seed % 4]
    M = random_psd(rng, q, int(rng.integers(1, q + 1)))
    W = step_polynomial("mft_M", M, None, al, be)(z)
    V = step_polynomial("mfti_M", M, None, al, be)(z)
    P = ml.projector(M, "range")
    want = -(be - z) * (be - al) * np.block([[P, 0 * P], [0 * P, np.eye(q)]])
    assert np.allclose(W @ V, want, atol=1e-8 * (1 + ml.norm(want)))


def test_eval_matrix_poly_examples():
    C0 = np.arange(4.0).reshape(2, 2)
    assert np.allclose(eval_matrix_poly(MatrixPoly2q(1, C0[None]), 3 + 1j), C0)
    assert np.allclose(MatrixPoly2q(1, np.stack([np.zeros((2, 2)), np.eye(2)]))(2), 2 * np.eye(2))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 2), st.integers(1, 3), st.integers(1, 3),
       st.complex_numbers(max_magnitude=3, allow_nan=False))
def test_poly_product_evaluates_pointwise(seed, q, n1, n2, z):
    rng = np.random.default_rng(seed)
    A = MatrixPoly2q(q, rng.standard_normal((n1, 2 * q, 2 * q)))
    B = MatrixPoly2q(q, rng.standard_normal((n2, 2 * q, 2 * q)))
    lhs, rhs = (A @ B)(z), A(z) @ B(z)
    assert np.allclose(lhs, rhs, atol=1e-9 * (1 + ml.norm(rhs)))


def test_poly_rejects_bad_shape():
    with pytest.raises(ValueError):
        MatrixPoly2q(2, np.zeros((1, 3, 3)))


def test_resolvent_single_factor_example():
    s = MomentSequence(-1, 1, [1.0])
    assert len(resolvent_factors(s, 0)) == 1
    assert np.allclose(resolvent_polynomial(s, 0)(0), [[1, 1], [-1, 1]])


def test_resolvent_rejects_non_member():
    with pytest.raises(DomainError):
        resolvent_polynomial(MomentSequence(-1, 1, [1.0, 2.0]), 1)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(0, 4), st.integers(1, 10))
def test_factorizations_agree(seed, q, m, atoms):
    _, s = random_fgg_sequence(q, m, atoms, seed, *INTERVALS[seed % 4])
    V, U = resolvent_polynomial(s, m, "V"), resolvent_polynomial(s, m, "U")
    assert V.degree <= 2 * (m + 1)
    rng = np.random.default_rng(seed)
    for _ in range(3):
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        assert np.allclose(V(z), U(z), atol=1e-7 * (1 + ml.norm(V(z))))


def test_lft_examples():
    Z = np.array([[2.0, 1.0], [0.0, 3.0]])
    I, O = np.eye(2), np.zeros((2, 2))
    assert np.allclose(lft(np.eye(4), Z, I), Z)
    assert np.allclose(lft(np.block([[O, I], [I, O]]), Z, I), np.linalg.inv(Z))
    W = step_polynomial("mfti_M", [[1.0]], None, -1, 1)(2j)
    assert np.isclose(lft(W, [[0.0]], [[1.0]])[0, 0], 1 / (1 - 2j))


def test_lft_singular_denominator():
    with pytest.raises(SingularDenominator):
        lft(np.eye(2), [[1.0]], [[0.0]])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_lft_composition(seed, q):
    rng = np.random.default_rng(seed)
    g = lambda r, c: rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))
    W1, W2, P, Q = g(2 * q, 2 * q), g(2 * q, 2 * q), g(q, q), g(q, q)
    lhs = lft(W2 @ W1, P, Q)
    rhs = lft(W2, lft(W1, P, Q), np.eye(q))
    assert np.allclose(lhs, rhs, atol=1e-8 * (1 + ml.norm(rhs)))


def test_block_split_round_trip():
    W = np.arange(16.0).reshape(4, 4)
    assert np.array_equal(BlockSplit.of(W).assemble(), W)
    J = J_im(2)
    assert np.allclose(J @ J, np.eye(4)) and np.allclose(J, J.conj().T)
