import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from conftest import random_density, random_subspace, random_unitary
from ebspace.errors import DimensionError, EmptySpaceError, ValidationError
from ebspace.states import (
    BipartiteSubspace,
    DensityOperator,
    ProbeState,
    ProductOperator,
    PureState,
    SeparableDecomposition,
    apply_product_operator,
    identity_probe,
    probe_to_vector,
    purify,
    random_probe,
    reduced_after_trace_B,
    reduced_state,
    subspace_distance,
)
from ebspace.tensor_core import partial_trace


def test_pure_state_requires_unit_norm():
    with pytest.raises(ValidationError):
        PureState(np.array([1.0, 1.0]), (2,))
    psi = PureState.from_unnormalized([1, 1], (2,))
    assert_allclose(np.linalg.norm(psi.amplitudes), 1.0)


@pytest.mark.parametrize(
    "matrix",
    [
        np.array([[0.5, 0.6], [0.6, 0.5]]),  # negative eigenvalue
        np.array([[0.5, 0.1j], [0.2j, 0.5]]),  # not Hermitian
        np.eye(2),  # trace 2
    ],
)
def test_density_operator_validation(matrix):
    with pytest.raises(ValidationError):
        DensityOperator(matrix, (2,))


def test_density_operator_basics(rng):
    rho = random_density(rng, 6, 2, (2, 3))
    assert rho.rank() == 2
    assert rho.range_basis().shape == (6, 2)
    assert rho.bipartite() == (2, 3)
    with pytest.raises(DimensionError):
        rho.bipartite((4, 2))


def test_from_vectors_keeps_orthonormal_input_verbatim():
    e = np.eye(6)
    v = BipartiteSubspace.from_vectors(2, 3, [e[0], e[4]])
    assert not v.orthonormalized
    assert_allclose(v.basis, [e[0], e[4]])


def test_from_vectors_orthonormalizes_and_flags():
    v = BipartiteSubspace.from_vectors(2, 2, [[1, 0, 0, 0], [1, 1, 0, 0], [0, 2, 0, 0]])
    assert v.orthonormalized
    assert v.dim == 2
    assert_allclose(v.basis @ v.basis.conj().T, np.eye(2), atol=1e-14)


@pytest.mark.parametrize(
    "vectors,error",
    [([[1, 0, 0]], DimensionError), ([[0, 0, 0, 0]], EmptySpaceError), ([[1, 0, 0, 0], [0, 0, 0, 0]], EmptySpaceError)],
)
def test_from_vectors_errors(vectors, error):
    with pytest.raises(error):
        BipartiteSubspace.from_vectors(2, 2, vectors)


def test_supports_and_contains():
    v = BipartiteSubspace.from_vectors(3, 3, [np.kron([1, 0, 0], [0, 1, 0]), np.kron([0, 1, 0], [0, 1, 1])])
    assert v.a_support().shape[1] == 2
    assert v.b_support().shape[1] == 2
    assert v.contains(np.kron([1, 1, 0], [0, 1, 0]) + np.kron([0, 1, 0], [0, 0, 1]))
    assert not v.contains(np.kron([0, 0, 1], [1, 0, 0]))


def test_restricted_embedded_round_trip(rng):
    v = random_subspace(rng, 2, 2, 2)
    ea = np.eye(3)[:, :2]
    eb = np.eye(4)[:, 1:3]
    big = v.embedded(ea, eb)
    assert (big.dA, big.dB) == (3, 4)
    assert subspace_distance(big.restricted(ea, eb), v) < 1e-12


def test_product_operator_rejects_non_unitary_flag():
    with pytest.raises(ValidationError):
        ProductOperator(np.eye(2), np.diag([1.0, 2.0]), bUnitary=True)
    ProductOperator(np.eye(2), np.diag([1.0, 2.0]), bUnitary=False)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_subspace_distance_is_unitarily_invariant(seed):
    g = np.random.default_rng(seed)
    v, w = random_subspace(g, 2, 3, 2), random_subspace(g, 2, 3, 2)
    op = ProductOperator(random_unitary(g, 2), random_unitary(g, 3))
    d0 = subspace_distance(v, w)
    d1 = subspace_distance(apply_product_operator(v, op), apply_product_operator(w, op))
    assert_allclose(d0, d1, atol=1e-12)
    assert subspace_distance(v, v) < 1e-12
    assert 0 <= d0 <= 1 + 1e-12


def test_identity_probe_reduction_matches_explicit_partial_trace(rng):
    v = random_subspace(rng, 2, 3, 2)
    p = identity_probe(v)
    # independent assembly of Psi_id = sum_i v_i (x) |i> / sqrt(k)
    psi = sum(np.kron(v.basis[i], np.eye(2)[i]) for i in range(2)) / np.sqrt(2)
    sigma = partial_trace(np.outer(psi, psi.conj()), (2, 3, 2), [0, 2])
    assert_allclose(reduced_after_trace_B(p).matrix, sigma, atol=1e-14)
    assert_allclose(probe_to_vector(p).amplitudes, psi, atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_random_probe_reduction_is_a_state(seed, anc):
    g = np.random.default_rng(seed)
    v = random_subspace(g, 3, 2, 2)
    p = random_probe(v, g, anc)
    sigma = reduced_after_trace_B(p)
    assert sigma.dims == (3, anc)
    assert_allclose(np.trace(sigma.matrix), 1.0, atol=1e-12)


def test_probe_requires_unit_norm(rng):
    v = random_subspace(rng, 2, 2, 2)
    with pytest.raises(ValidationError):
        ProbeState(v, np.eye(2))
    with pytest.raises(DimensionError):
        ProbeState(v, np.ones((3, 1)) / np.sqrt(3))


def test_purify_reproduces_state(rng):
    rho = random_density(rng, 4, 3, (2, 2))
    psi = purify(rho)
    assert psi.dims == (2, 2, 3)
    assert_allclose(reduced_state(psi, (0, 1)).matrix, rho.matrix, atol=1e-13)


def test_separable_decomposition_reassembles():
    dec = SeparableDecomposition(np.array([0.25, 0.75]), np.array([[1, 0], [0, 1]]), np.array([[0, 1], [1, 0]]))
    expected = 0.25 * np.diag([0, 1, 0, 0]) + 0.75 * np.diag([0, 0, 1, 0])
    assert_allclose(dec.reassemble(), expected, atol=1e-15)
    assert len(dec) == 2
