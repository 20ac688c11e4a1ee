import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from conftest import BELL, random_density
from ebspace.separability import (
    SepStatus,
    extract_separable_decomposition,
    is_ppt,
    is_separable_exact,
    local_supports,
    min_pt_eigenvalue,
    two_qubit_det_criterion,
)
from ebspace.states import DensityOperator

SINGLET = np.array([0, 1, -1, 0]) / np.sqrt(2)


def werner(p):
    return DensityOperator(p * np.outer(SINGLET, SINGLET) + (1 - p) * np.eye(4) / 4, (2, 2))


@pytest.mark.parametrize("p,expected", [(0.0, SepStatus.SEPARABLE), (0.3, SepStatus.SEPARABLE),
                                        (0.34, SepStatus.ENTANGLED), (1.0, SepStatus.ENTANGLED)])
def test_werner_threshold(p, expected):
    # min PT eigenvalue (1 - 3p)/4 changes sign at p = 1/3
    rho = werner(p)
    assert_allclose(min_pt_eigenvalue(rho), (1 - 3 * p) / 4, atol=1e-14)
    assert is_separable_exact(rho).status is expected


def test_bell_is_npt():
    flag, lam = is_ppt(DensityOperator(np.outer(BELL, BELL), (2, 2)))
    assert not flag
    assert_allclose(lam, -0.5)


def test_rank_deficit_rule():
    # rank-1 state of Schmidt rank 3: local supports exceed the rank
    psi = np.eye(9)[[0, 4, 8]].sum(axis=0) / np.sqrt(3)
    v = is_separable_exact(DensityOperator(np.outer(psi, psi), (3, 3)))
    assert (v.status, v.reason) == (SepStatus.ENTANGLED, "rank-deficit")


def test_support_restriction_small_support():
    # a 2x2 separable state embedded in 3x4
    rho = np.zeros((12, 12))
    rho[0, 0] = rho[5, 5] = 0.5
    v = is_separable_exact(DensityOperator(rho, (3, 4)))
    assert v.support == (2, 2)
    assert (v.status, v.reason) == (SepStatus.SEPARABLE, "ppt-small-support")


def test_low_rank_rule_and_undecided():
    # rank-3 PPT state on full 3x3 support
    vecs = [np.kron(np.eye(3)[i], np.eye(3)[i]) for i in range(3)]
    rho = sum(np.outer(v, v) for v in vecs) / 3
    v = is_separable_exact(DensityOperator(rho, (3, 3)))
    assert (v.status, v.reason) == (SepStatus.SEPARABLE, "ppt-rank-le-3")
    # rank 9 on 3x3 is outside every sufficient rule
    v = is_separable_exact(DensityOperator(np.eye(9) / 9, (3, 3)))
    assert (v.status, v.reason) == (SepStatus.UNKNOWN, "ppt-undecided")


def test_rank_equal_support_rule():
    # rank 4 on 4x4 support with product-vector range
    g = np.random.default_rng(5)
    vecs = [np.kron(np.eye(4)[i], g.normal(size=4)) for i in range(4)]
    rho = sum(np.outer(v, v) for v in vecs)
    v = is_separable_exact(DensityOperator(rho / np.trace(rho), (4, 4)))
    assert (v.status, v.reason) == (SepStatus.SEPARABLE, "ppt-rank-eq-support")


def test_local_supports_shapes():
    rho = np.zeros((6, 6))
    rho[0, 0] = 1
    e1, e2 = local_supports(rho, (2, 3))
    assert e1.shape == (2, 1) and e2.shape == (3, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4))
def test_det_criterion_agrees_with_ppt_on_two_qubits(seed, rank):
    rho = random_density(np.random.default_rng(seed), 4, rank, (2, 2))
    flag, lam = is_ppt(rho)
    if abs(lam) < 1e-8:
        return
    assert two_qubit_det_criterion(rho)[0] == flag


@pytest.mark.parametrize("p", [0.1, 0.25])
def test_extraction_reassembles_werner(p):
    rho = werner(p)
    res = extract_separable_decomposition(rho, seed=1)
    assert res.success
    assert_allclose(res.decomposition.reassemble(), rho.matrix, atol=1e-6)
    assert_allclose(res.decomposition.weights.sum(), 1.0, atol=1e-12)


def test_extraction_fails_on_entangled_state():
    res = extract_separable_decomposition(werner(0.8), seed=0, restarts=2, maxiter=300)
    assert not res.success
    assert res.error > 1e-3


def test_exact_with_extraction_attaches_decomposition():
    v = is_separable_exact(werner(0.2), extract=True, seed=2)
    assert v.separable and v.decomposition is not None
