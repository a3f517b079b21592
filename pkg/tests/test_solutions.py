import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact import matlin as ml
from artifact import solutions as so
from artifact.hausdorff_seq import MomentSequence, extend, interval_data
from artifact.matlin import DomainError
from artifact.measures import Arcsine, moments_from_transform, random_fgg_sequence, stieltjes_eval

INTERVALS = [(-1.0, 1.0), (0.0, 1.0), (-0.5, 2.0), (1.0, 4.0)]
Z = 2j


def s1(*x, al=-1.0, be=1.0):
    return MomentSequence(al, be, list(x))


def val(F, z=Z):
    return complex(F(z)[0, 0])


# pairs


def test_zero_one_pair():
    P, Q = so.make_pair({"catalog": "zero_one"}, q=2)(0.3 + 1j)
    assert np.allclose(P, 0) and np.allclose(Q, np.eye(2))


def test_stieltjes_constant_pair_value():
    pair = so.make_pair({"catalog": "stieltjes_constant", "X": [[1.0]], "Y": [[1.0]], "variant": "h"}, s1(1.0), 0)
    P, Q = pair(Z)
    assert np.isclose(P[0, 0], 1) and np.isclose(Q[0, 0], 1 - Z)


def test_stieltjes_constant_validation():
    with pytest.raises(DomainError):
        so.make_pair({"catalog": "stieltjes_constant", "X": [[-1.0]], "Y": [[1.0]], "variant": "h"}, q=1)
    with pytest.raises(DomainError):
        so.make_pair({"catalog": "stieltjes_constant", "X": [[0.0]], "Y": [[0.0]], "variant": "h"}, q=1)


def test_subspace_full_pair_value():
    P, Q = so.make_pair({"catalog": "subspace", "U": [[1.0]]}, s1(1.0), 0)(0.7j)
    assert np.isclose(P[0, 0], 1) and np.isclose(Q[0, 0], 0)


def test_subspace_outside_range_is_rejected():
    s = MomentSequence(-1, 1, [np.diag([1.0, 0.0]), np.diag([1.0, 0.0])])
    with pytest.raises(DomainError):
        so.make_pair({"catalog": "subspace", "U": [[0.0], [1.0]]}, s, 1)


def test_unknown_catalog():
    with pytest.raises(ValueError):
        so.make_pair({"catalog": "nope"}, q=1)


# admissibility


def test_admissibility_examples():
    grid = so.default_grid(-1, 1)
    s = s1(1.0)
    assert so.check_pair_admissible(so.make_pair({"catalog": "zero_one"}, s, 0), s, 0, grid).passed
    h = so.make_pair({"catalog": "stieltjes_constant", "X": [[1.0]], "Y": [[1.0]], "variant": "h"}, s, 0)
    rep = so.check_pair_admissible(h, s, 0, grid)
    assert rep.passed and rep.verdict == "no violation found on grid"
    # (I, 0) against d_1 = 0: ran I is not inside {0}
    t = s1(1.0, -1.0)
    bad = so.make_pair({"catalog": "stieltjes_constant", "X": [[1.0]], "Y": [[0.0]], "variant": "h"}, t, 1)
    rep = so.check_pair_admissible(bad, t, 1, grid)
    assert not rep.passed and not rep.range_ok


# solve


def test_solve_hand_values():
    s = s1(1.0)
    zo = so.make_pair({"catalog": "zero_one"}, s, 0)
    assert np.isclose(so.solve(s, 0, zo, Z)[0, 0], 1 / (1 - Z))
    full = so.make_pair({"catalog": "subspace", "U": [[1.0]]}, s, 0)
    assert np.isclose(so.solve(s, 0, full, Z)[0, 0], -1 / (Z + 1))
    cen = so.make_pair({"catalog": "central"}, s, 0)
    assert np.isclose(so.solve(s, 0, cen, Z)[0, 0], 1j / np.sqrt(5))


def test_solve_rejects_non_member():
    with pytest.raises(DomainError):
        so.solve(s1(1.0, 2.0), 1, so.make_pair({"catalog": "zero_one"}, q=1), Z)


# special solutions


def test_unique_solution_examples():
    assert np.isclose(val(so.solve_degenerate_unique(s1(1.0, -1.0))), -1 / (Z + 1))
    assert np.isclose(val(so.solve_degenerate_unique(s1(1.0, 1.0))), 1 / (1 - Z))
    assert np.allclose(so.solve_degenerate_unique(s1(0.0))(Z), 0)
    with pytest.raises(DomainError):
        so.solve_degenerate_unique(s1(1.0))


def test_extremal_examples():
    assert np.isclose(val(so.extremal(s1(1.0), "lower")), -1 / (Z + 1))
    assert np.isclose(val(so.extremal(s1(1.0), "upper")), 1 / (1 - Z))
    # odd m: the lower solution is the U = {0} subspace branch
    s = s1(1.0, 0.0)
    empty = so.make_pair({"catalog": "subspace", "U": None}, s, 1)
    F = so.solution(s, 1, empty)
    for z in (Z, 0.3 - 0.5j, 3.0):
        assert np.isclose(val(so.extremal(s, "lower"), z), val(F, z))


@pytest.mark.parametrize("al, be", [(-1, 1), (0, 1), (1, 4)])
def test_central_is_arcsine_transform(al, be):
    F, psi = so.central(s1(1.0, al=al, be=be)), Arcsine(al, be)
    rng = np.random.default_rng(1)
    for _ in range(20):
        z = complex(rng.uniform(al - 1, be + 1), rng.choice([-1, 1]) * rng.uniform(0.05, 2))
        assert abs(val(F, z) - psi(z)) <= 1e-9


def test_central_moments_continue_by_midpoints():
    got = moments_from_transform(so.central(s1(1.0, 0.0)), 4, -1, 1)
    assert np.allclose([x[0, 0] for x in got.moments], [1, 0, 0.5, 0, 0.375], atol=1e-10)


def test_special_dispatch():
    assert np.isclose(val(so.special(s1(1.0, -1.0), "unique")), -1 / (Z + 1))
    with pytest.raises(ValueError):
        so.special(s1(1.0), "median")


# elementary steps


def test_forward_first_example():
    G1, G2 = so.schur_step("forward", "first", Z, -1, 1, F=[[-1 / Z]], M=[[1.0]])
    assert np.isclose(G1[0, 0], 0.5j) and np.isclose(G2[0, 0], 1 + 0.5j)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 4))
def test_step_round_trips(seed, q, m):
    mu, s = random_fgg_sequence(q, m, 1 + seed % ((m + 2) * q), seed, *INTERVALS[seed % 4])
    A, M = so.later_step_data(s)
    rng = np.random.default_rng(seed)
    for _ in range(5):
        z = complex(rng.uniform(-3, 3), rng.choice([-1, 1]) * rng.uniform(0.1, 2))
        F = stieltjes_eval(mu, z)
        G1, G2 = so.schur_step("forward", "first", z, s.alpha, s.beta, F=F, M=M)
        back = so.schur_step("inverse", "first", z, s.alpha, s.beta, G1=G1, G2=G2, M=M)
        assert ml.norm(back - F) <= 1e-9 * (1 + ml.norm(F))
        G = so.schur_step("forward", "later", z, s.alpha, s.beta, F=F, A=A, M=M)
        back = so.schur_step("inverse", "later", z, s.alpha, s.beta, G=G, A=A, M=M)
        assert ml.norm(back - F) <= 1e-9 * (1 + ml.norm(F))


def test_schur_step_unknown():
    with pytest.raises(ValueError):
        so.schur_step("sideways", "first", Z, -1, 1, F=[[1.0]], M=[[1.0]])


# class membership


def test_membership_examples():
    grid = so.default_grid(-1, 1)
    assert so.check_rab_membership(lambda z: np.array([[-1 / z]]), grid, -1, 1).passed
    assert not so.check_rab_membership(lambda z: np.array([[1 / z]]), grid, -1, 1).passed
    assert so.check_rab_membership(lambda z: np.zeros((1, 1)), grid, -1, 1).passed


# properties over random instances


def _instance(seed, q, m):
    atoms = [(m + 2) * q, max(1, (m + 1) // 2), m + 1][seed % 3]
    kw = {"weight_rank": 1} if seed % 3 == 2 else {}
    return random_fgg_sequence(q, m, atoms, seed, *INTERVALS[seed % 4], **kw)[1]


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(0, 3))
def test_catalog_solutions_reproduce_moments(seed, q, m):
    s = _instance(seed, q, m)
    d = ml.psd_truncate(interval_data(s).d[m], scale=s.scale())
    U, _ = ml.range_basis(d)
    specs = [
        {"catalog": "zero_one"},
        {"catalog": "stieltjes_constant", "X": d, "Y": np.eye(q), "variant": "h"},
        {"catalog": "subspace", "U": U[:, :1]},
        {"catalog": "central"},
    ]
    grid = so.default_grid(s.alpha, s.beta, 4, seed)
    for spec in specs:
        F = so.solution(s, m, so.make_pair(spec, s, m))
        got = moments_from_transform(F, m, s.alpha, s.beta)
        assert max(ml.norm(a - b) for a, b in zip(got.moments, s.moments)) <= 1e-6 * s.scale()
        assert so.check_rab_membership(F, grid, s.alpha, s.beta).passed


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(0, 3), st.sampled_from(["lower", "upper"]))
def test_extremal_solution_extends_to_endpoint(seed, q, m, which):
    s = _instance(seed, q, m)
    got = moments_from_transform(so.extremal(s, which), m + 1, s.alpha, s.beta)
    want = extend(s, which)[m + 1]
    assert ml.norm(got[m + 1] - want) <= 1e-6 * s.scale()


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_reduced_pair_is_basis_independent(seed, m):
    s = random_fgg_sequence(3, m, m + 1, seed, *INTERVALS[seed % 4], weight_rank=1)[1]
    d = ml.psd_truncate(interval_data(s).d[m], scale=s.scale())
    r = ml.rank(d, scale=s.scale())
    if not 1 <= r <= 2:
        return
    inner = {"catalog": "stieltjes_constant", "X": np.eye(r), "Y": np.eye(r), "variant": "h"}
    U, V = ml.range_basis(d)
    rng = np.random.default_rng(seed)
    W2 = np.hstack([U[:, rng.permutation(r)], V[:, rng.permutation(3 - r)]])
    a = so.solution(s, m, so.make_pair({"catalog": "reduced", "inner": inner}, s, m))
    b = so.solution(s, m, so.make_pair({"catalog": "reduced", "inner": inner, "W": W2}, s, m))
    for z in (1j, 0.5 - 2j, s.beta + 1.0):
        assert ml.norm(a(z) - b(z)) <= 1e-8 * (1 + ml.norm(a(z)))
