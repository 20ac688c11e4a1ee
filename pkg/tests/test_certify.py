import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from conftest import random_subspace, random_unitary, saturating_eb
from ebspace.certify import (
    EBStatus,
    Family3Params,
    certify,
    certify_2xn_dim2,
    certify_dim1,
    certify_mx2_dim2,
    certify_mx3_dim2,
    certify_mx3_dim3,
    choi_reduction,
    dimension_bound_reject,
    extract_family3_params,
    family3_inequality,
    numeric_falsify,
    replay_counterexample,
)
from ebspace.construct import Family2xnParams, family3_space, family_2xn_space, ket
from ebspace.errors import PreconditionError
from ebspace.states import BipartiteSubspace, ProductOperator, apply_product_operator
from ebspace.separability import min_pt_eigenvalue
from ebspace.tensor_core import partial_transpose


def _unnormalized_choi_pt_det(d, f, theta, g):
    # sigma = Tr_B |Psi><Psi|, Psi = v1 (x) |0> + v2 (x) |1>, built entry by entry
    v = np.zeros((2, 2, 3), dtype=complex)  # (generator, A, B)
    v[0, 0, 0] = v[0, 1, 1] = 1
    v[1, 0, 1] = 1
    v[1, 1] = [d, f * np.exp(1j * theta), g]
    sig = np.zeros((2, 2, 2, 2), dtype=complex)  # (A, k, A', k')
    for a in range(2):
        for k in range(2):
            for a2 in range(2):
                for k2 in range(2):
                    sig[a, k2, a2, k] = sum(v[k, a, b] * np.conj(v[k2, a2, b]) for b in range(3))
    # the loop writes the partial transpose on the ancilla directly
    return float(np.linalg.det(sig.reshape(4, 4)).real)


@pytest.mark.parametrize(
    "params,expected",
    [((0, 0, 0, 2), 3.0), ((1, 0, 0, 1), 0.0), ((0.5, 0.3, 0.7, 1.2), 0.42029704286102154),
     ((0.2, 1.1, 2.0, 0.4), -2.3427635124979878)],
)
def test_family3_inequality_values(params, expected):
    assert_allclose(family3_inequality(params), expected, atol=1e-14)
    assert_allclose(Family3Params(*params).lhs, expected, atol=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 3), st.floats(0, 3), st.floats(0, np.pi), st.floats(0.01, 3))
def test_inequality_equals_pt_determinant(d, f, theta, g):
    assert_allclose(family3_inequality((d, f, theta, g)), _unnormalized_choi_pt_det(d, f, theta, g),
                    atol=1e-9 * (1 + d**4 + g**4 + f**4))


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 3), st.floats(0, 3), st.floats(0, np.pi), st.floats(0.05, 3))
def test_inequality_sign_matches_normalized_choi_determinant(d, f, theta, g):
    p = Family3Params(d, f, theta, g)
    if abs(p.lhs) < 1e-6:
        return
    sigma = choi_reduction(family3_space(p)).matrix
    det = np.linalg.det(partial_transpose(sigma, (2, 2), 1)).real
    assert np.sign(det) == np.sign(p.lhs)


def test_fixture_v_certifies_family3(fx):
    v = certify(fx.spaceV)
    assert v.status is EBStatus.EB and v.family == "family3"
    p = v.params["params"]
    assert_allclose([p.d, p.f, p.g], [0, 0, 2], atol=1e-8)
    assert v.params["residual"] < 1e-10


def test_fixture_u_certifies(fx):
    v = certify(fx.spaceU)
    assert v.status is EBStatus.EB and v.family == "3dim-3N"
    assert_allclose(np.abs(v.params["x"]), np.sqrt(2), atol=1e-12)


def test_dim1_is_eb(rng):
    v = random_subspace(rng, 3, 3, 1)
    assert certify_dim1(v).is_eb
    assert certify(v).route == "dim1"
    with pytest.raises(PreconditionError):
        certify_dim1(random_subspace(rng, 3, 3, 2))


@pytest.mark.parametrize("m,n", [(2, 1), (2, 2), (3, 2), (4, 3)])
def test_dimension_bound_counterexample_replays(rng, m, n):
    v = random_subspace(rng, m, n, n + 1)
    verdict = dimension_bound_reject(v)
    assert verdict.status is EBStatus.NOT_EB
    rep = replay_counterexample(verdict.counterexample)
    assert rep.entangled


def test_support_bound():
    # B-support 1 with A-support 2
    v = BipartiteSubspace.from_vectors(2, 2, [np.kron([1, 0], [1, 0]), np.kron([0, 1], [1, 0])])
    assert dimension_bound_reject(v).route == "dimension-bound"


@pytest.mark.parametrize("m,n", [(2, 2), (3, 2), (3, 3), (2, 4)])
def test_saturating_spaces_are_eb(rng, m, n):
    assert certify(saturating_eb(rng, m, n)).is_eb


def test_non_orthogonal_b_partners_are_not_eb():
    b1 = np.array([1, 1]) / np.sqrt(2)
    v = BipartiteSubspace.from_vectors(2, 2, [np.kron([1, 0], [1, 0]), np.kron([0, 1], b1)])
    verdict = certify_mx2_dim2(v)
    assert verdict.status is EBStatus.NOT_EB
    assert replay_counterexample(verdict.counterexample).entangled


def test_mx3_dim3_rejects_entangled_member(rng):
    e = np.eye(3)
    v = BipartiteSubspace.from_vectors(3, 3, [np.kron(e[0], e[0]), np.kron(e[1], e[1]), np.kron(e[2], e[2] + e[0])])
    assert certify_mx3_dim3(v).status is EBStatus.NOT_EB
    assert certify_mx3_dim3(saturating_eb(rng, 3, 3)).is_eb


def test_family1_and_family2_examples():
    f1 = BipartiteSubspace.from_vectors(3, 3, [ket(3, 3, (1, 0, 0)), ket(3, 3, (1, 1, 1), (1, 2, 2))])
    assert certify_mx3_dim2(f1).family == "family1"
    f2 = BipartiteSubspace.from_vectors(3, 3, [ket(3, 3, (1, 0, 0), (1, 1, 1)), ket(3, 3, (1, 1, 1), (1, 2, 2))])
    assert certify_mx3_dim2(f2).family == "family2"


@pytest.mark.parametrize("params,status", [((0, 0, 0, 2), EBStatus.EB), ((0.2, 1.1, 2.0, 0.4), EBStatus.NOT_EB),
                                           ((0.5, 0.3, 0.7, 1.2), EBStatus.EB)])
def test_family3_members(params, status):
    verdict = certify_mx3_dim2(family3_space(Family3Params(*params)))
    assert verdict.status is status
    if status is EBStatus.NOT_EB:
        assert replay_counterexample(verdict.counterexample).min_pt_eigenvalue < -1e-6


def test_family3_boundary_flag():
    verdict = certify_mx3_dim2(family3_space(Family3Params(1, 0, 0, 1)))
    assert verdict.is_eb and verdict.evidence["boundary"]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_family3_extraction_recovers_native_parameters(seed):
    g = np.random.default_rng(seed)
    p = Family3Params(g.uniform(0, 2), g.uniform(0, 2), g.uniform(0, np.pi), g.uniform(0.2, 2.5))
    q, info = extract_family3_params(family3_space(p))
    assert info["residual"] < 1e-8
    assert_allclose([q.d, q.g], [p.d, p.g], atol=1e-8)
    assert_allclose(q.f * np.exp(1j * q.theta), p.f * np.exp(1j * p.theta), atol=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_family3_verdict_is_invariant_under_eb_equivalence(seed):
    # the normal form is not unique on an orbit; the verdict and the verified equivalence are
    g = np.random.default_rng(seed)
    p = Family3Params(g.uniform(0, 2), g.uniform(0, 2), g.uniform(0, np.pi), g.uniform(0.2, 2.5))
    if abs(p.lhs) < 1e-3:
        return
    w = g.normal(size=(2, 2)) + 1j * g.normal(size=(2, 2))
    moved = apply_product_operator(family3_space(p), ProductOperator(w, random_unitary(g, 3)))
    q, info = extract_family3_params(moved)
    assert info["residual"] < 1e-8
    assert np.sign(q.lhs) == np.sign(p.lhs)
    assert certify_mx3_dim2(moved).status is certify_mx3_dim2(family3_space(p)).status


def test_extraction_preconditions(fx):
    with pytest.raises(PreconditionError):
        extract_family3_params(fx.spaceU)
    with pytest.raises(PreconditionError):
        extract_family3_params(BipartiteSubspace.from_vectors(2, 3, [ket(2, 3, (1, 0, 0)), ket(2, 3, (1, 1, 1))]))


def test_2xn_family_and_rejection():
    p = Family2xnParams((1, 0.5), (0.3, 0.2), (0.1, 1), (0.4, 0.7))
    assert certify_2xn_dim2(family_2xn_space(p)).is_eb
    g = np.random.default_rng(8)
    for _ in range(10):
        v = random_subspace(g, 2, 4, 2)
        verdict = certify(v, seed=1)
        lam = min_pt_eigenvalue(choi_reduction(v))
        assert verdict.is_eb == (lam >= -1e-9)
        if not verdict.is_eb:
            assert replay_counterexample(verdict.counterexample).entangled


def test_random_two_dim_spaces_agree_with_falsifier():
    g = np.random.default_rng(11)
    for _ in range(10):
        v = random_subspace(g, 3, 3, 2)
        verdict = certify_mx3_dim2(v)
        res = numeric_falsify(v, budget=30, seed=0)
        assert verdict.status is EBStatus.NOT_EB
        assert res.found
        assert replay_counterexample(verdict.counterexample).min_pt_eigenvalue < -1e-6


def test_falsifier_finds_nothing_on_eb_space(fx):
    res = numeric_falsify(fx.spaceV, budget=20, seed=3)
    assert not res.found
    assert res.min_value > -1e-9


def test_falsifier_is_deterministic_and_validates_budget(rng):
    v = random_subspace(rng, 2, 3, 2)
    a, b = numeric_falsify(v, budget=10, seed=5), numeric_falsify(v, budget=10, seed=5)
    assert a.min_value == b.min_value
    assert_allclose(a.counterexample.coeffs, b.counterexample.coeffs)
    with pytest.raises(ValueError):
        numeric_falsify(v, budget=0)


def test_dispatcher_falls_back_to_choi(rng):
    # 3-dim in C^3 (x) C^4: no structural family applies
    v = saturating_eb(rng, 3, 4)
    sub = BipartiteSubspace.from_vectors(3, 4, list(v.basis[:3]))
    verdict = certify(sub)
    assert verdict.status in (EBStatus.EB, EBStatus.NOT_EB)
    if verdict.status is EBStatus.NOT_EB:
        assert replay_counterexample(verdict.counterexample).entangled
