import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from ebspace.errors import DimensionError, ValidationError
from ebspace.tensor_core import (
    MatrixPencil,
    as_dims,
    column_space,
    hermitian_eigs,
    kron,
    null_space,
    numerical_rank,
    partial_trace,
    partial_transpose,
    pencil_rank_one_points,
    schmidt_decompose,
)

BELL = np.array([1, 0, 0, 1]) / np.sqrt(2)


def _rand_rho(seed, n):
    g = np.random.default_rng(seed)
    x = g.normal(size=(n, n)) + 1j * g.normal(size=(n, n))
    rho = x @ x.conj().T
    return rho / np.trace(rho)


def _naive_partial_trace(rho, d1, d2, keep):
    # explicit index loops as an independent oracle
    out = np.zeros((d1, d1) if keep == 0 else (d2, d2), dtype=complex)
    for i in range(out.shape[0]):
        for j in range(out.shape[0]):
            if keep == 0:
                out[i, j] = sum(rho[i * d2 + k, j * d2 + k] for k in range(d2))
            else:
                out[i, j] = sum(rho[k * d2 + i, k * d2 + j] for k in range(d1))
    return out


@pytest.mark.parametrize("d1,d2", [(2, 2), (2, 3), (3, 2), (3, 4)])
@pytest.mark.parametrize("keep", [0, 1])
def test_partial_trace_matches_index_loops(d1, d2, keep):
    rho = _rand_rho(d1 * 10 + d2, d1 * d2)
    assert_allclose(partial_trace(rho, (d1, d2), [keep]), _naive_partial_trace(rho, d1, d2, keep), atol=1e-13)


def test_partial_trace_three_factors_keeps_order():
    mats = [_rand_rho(s, d) for s, d in zip(range(3), (2, 3, 2))]
    rho = kron(kron(mats[0], mats[1]), mats[2])
    assert_allclose(partial_trace(rho, (2, 3, 2), [2, 0]), kron(mats[2], mats[0]), atol=1e-13)
    assert_allclose(partial_trace(rho, (2, 3, 2), [0, 2]), kron(mats[0], mats[2]), atol=1e-13)
    assert_allclose(partial_trace(rho, (2, 3, 2), [1]), mats[1], atol=1e-13)


def test_partial_trace_rejects_bad_dims():
    with pytest.raises(DimensionError):
        partial_trace(np.eye(6), (2, 2), [0])
    with pytest.raises(DimensionError):
        as_dims((2, 0))


def test_bell_partial_transpose_spectrum():
    g = partial_transpose(np.outer(BELL, BELL), (2, 2), 1)
    assert_allclose(np.linalg.eigvalsh(g), [-0.5, 0.5, 0.5, 0.5], atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([(2, 2), (2, 3), (3, 3)]))
def test_partial_transpose_is_an_involution_and_preserves_trace(seed, dims):
    rho = _rand_rho(seed, dims[0] * dims[1])
    g = partial_transpose(rho, dims, 1)
    assert_allclose(partial_transpose(g, dims, 1), rho, atol=1e-14)
    assert_allclose(np.trace(g), 1.0, atol=1e-12)
    # transposing both factors is the full transpose
    assert_allclose(partial_transpose(g, dims, 0), rho.T, atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_partial_trace_of_product_is_factor(seed):
    a, b = _rand_rho(seed, 2), _rand_rho(seed + 1, 3)
    assert_allclose(partial_trace(kron(a, b), (2, 3), [0]), a, atol=1e-13)
    assert_allclose(partial_trace(kron(a, b), (2, 3), [1]), b, atol=1e-13)


def test_hermitian_eigs_descending_and_validated():
    w, v = hermitian_eigs(np.diag([1.0, 3.0, 2.0]))
    assert_allclose(w, [3, 2, 1])
    with pytest.raises(ValidationError):
        hermitian_eigs(np.array([[0, 1], [0, 0]]))


def test_schmidt_decompose_weighted_state():
    psi = np.sqrt(0.9) * np.array([1, 0, 0, 0]) + np.sqrt(0.1) * np.array([0, 0, 0, 1])
    s, a, b = schmidt_decompose(psi, (2, 2))
    assert_allclose(s, [np.sqrt(0.9), np.sqrt(0.1)], atol=1e-14)
    assert_allclose(sum(s[k] * np.kron(a[:, k], b[:, k]) for k in range(2)), psi, atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_schmidt_reconstructs(seed):
    g = np.random.default_rng(seed)
    psi = g.normal(size=6) + 1j * g.normal(size=6)
    s, a, b = schmidt_decompose(psi, (2, 3))
    rebuilt = sum(s[k] * np.kron(a[:, k], b[:, k]) for k in range(len(s)))
    assert_allclose(rebuilt, psi, atol=1e-12)
    assert np.all(np.diff(s) <= 1e-15)


def test_rank_helpers():
    m = np.outer([1, 2, 3], [1, 0, 1]) + np.outer([0, 1, 0], [0, 1, 0])
    assert numerical_rank(m) == 2
    assert column_space(m).shape == (3, 2)
    ns = null_space(m)
    assert ns.shape == (3, 1)
    assert_allclose(m @ ns, 0, atol=1e-13)
    assert numerical_rank(np.zeros((3, 3))) == 0


def test_pencil_diagonal_has_two_points():
    p = MatrixPencil(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    pts = pencil_rank_one_points(p).points
    assert len(pts) == 2
    for mu, lam in pts:
        assert numerical_rank(p.at(mu, lam)) == 1


def test_pencil_continuum_and_empty():
    e00 = np.zeros((2, 3))
    e00[0, 0] = 1
    e01 = np.zeros((2, 3))
    e01[0, 1] = 1
    assert pencil_rank_one_points(MatrixPencil(e00, e01)).continuum
    # |00>+|11>, |01>+|12>: no product vector
    m1 = np.array([[1, 0, 0], [0, 1, 0]])
    m2 = np.array([[0, 1, 0], [0, 0, 1]])
    res = pencil_rank_one_points(MatrixPencil(m1, m2))
    assert res.points == [] and not res.continuum


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_pencil_recovers_planted_product_vector(seed):
    g = np.random.default_rng(seed)
    a, b = g.normal(size=2) + 1j * g.normal(size=2), g.normal(size=3) + 1j * g.normal(size=3)
    m1 = np.outer(a, b)
    m2 = g.normal(size=(2, 3)) + 1j * g.normal(size=(2, 3))
    pts = pencil_rank_one_points(MatrixPencil(m1, m2)).points
    assert len(pts) == 1
    mu, lam = pts[0]
    assert abs(lam) < 1e-8
    assert numerical_rank(MatrixPencil(m1, m2).at(mu, lam), 1e-7) == 1
