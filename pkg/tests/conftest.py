import numpy as np
import pytest

from ebspace.construct import fixtures
from ebspace.states import BipartiteSubspace, DensityOperator

ACCEPTANCE_LINES: dict = {}

BELL = np.array([1, 0, 0, 1]) / np.sqrt(2)


def random_unitary(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, n, rank, dims=None):
    x = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = x @ x.conj().T
    return DensityOperator(rho / np.trace(rho).real, dims or (n,))


def random_subspace(rng, da, db, k):
    x = rng.normal(size=(k, da * db)) + 1j * rng.normal(size=(k, da * db))
    return BipartiteSubspace.from_vectors(da, db, list(x))


def saturating_eb(rng, m, n):
    """``span{|x_j, b_j>}`` with random ``x_j`` and a random orthonormal ``b``."""
    u = random_unitary(rng, n)
    xs = rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))
    return BipartiteSubspace.from_vectors(m, n, [np.kron(xs[j], u[:, j]) for j in range(n)])


@pytest.fixture(scope="session")
def fx():
    return fixtures()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def bell_state():
    return DensityOperator(np.outer(BELL, BELL), (2, 2))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
