"""Entanglement of formation: pure-state entropy, the two-qubit closed form,
a numerical convex roof, additivity checks and entanglement cost.

All values are in ebits (base-2 logarithms).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .certify import EBStatus, EBVerdict, certify
from .errors import CertificateError, DimensionError, DomainError, PreconditionError
from .separability import is_separable_exact
from .states import BipartiteSubspace, DensityOperator, PureState
from .tensor_core import RANK_TOL, as_dims

LN2 = np.log(2.0)
SCHMIDT_CUTOFF = 1e-14

__all__ = [
    "AdditivityReport",
    "EOFEstimate",
    "NonadditivityReport",
    "additivity_check",
    "concurrence",
    "convex_roof_eof",
    "entanglement_cost",
    "entanglement_entropy",
    "eof",
    "nonadditive_candidate",
    "regroup_tensor",
    "scan_nonadditivity",
    "section_iv_state",
    "wootters_eof",
]


def _binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1 - x) * np.log2(1 - x))


def _entropy_of_matrix(mat: np.ndarray) -> float:
    s2 = np.linalg.svd(mat, compute_uv=False) ** 2
    w = s2.sum()
    if w == 0:
        return 0.0
    s2 = s2[s2 > SCHMIDT_CUTOFF * w]
    q = s2 / s2.sum()
    return float(-np.sum(q * np.log2(q)))


def entanglement_entropy(psi: PureState | np.ndarray, cut: Sequence[int] | None = None) -> float:
    """Entropy of entanglement of a pure state across a two-factor cut.

    Examples
    --------
    >>> round(entanglement_entropy(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2)), 12)
    1.0
    """
    if isinstance(psi, PureState):
        amp = psi.amplitudes
        if cut is None:
            if len(psi.dims) != 2:
                raise DimensionError("a two-factor cut is required")
            cut = psi.dims
    else:
        amp = np.asarray(psi, dtype=complex).ravel()
        if cut is None:
            raise DimensionError("a cut is required for raw vectors")
    d1, d2 = as_dims(cut, amp.size)
    return _entropy_of_matrix(amp.reshape(d1, d2) / np.linalg.norm(amp))


def _as_matrix(rho) -> tuple[np.ndarray, tuple]:
    if isinstance(rho, DensityOperator):
        return rho.matrix, rho.dims
    m = np.asarray(rho, dtype=complex)
    return m, (m.shape[0],)


def wootters_eof(rho) -> float:
    """Two-qubit EOF from the concurrence ``C = max(0, l1 - l2 - l3 - l4)``.

    ``l_i`` are the decreasing square roots of the eigenvalues of
    ``rho (sy (x) sy) rho* (sy (x) sy)``; ``E = h((1 + sqrt(1 - C^2)) / 2)``.
    """
    m, dims = _as_matrix(rho)
    if m.shape != (4, 4) or (len(dims) > 1 and int(np.prod(dims)) != 4):
        raise DimensionError("wootters_eof needs a two-qubit state")
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    tilde = yy @ m.conj() @ yy
    ev = np.linalg.eigvals(m @ tilde)
    lam = np.sort(np.sqrt(np.clip(ev.real, 0.0, None)))[::-1]
    conc = max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
    return _binary_entropy((1 + np.sqrt(max(0.0, 1 - conc * conc))) / 2)


def concurrence(rho) -> float:
    """Two-qubit concurrence."""
    m, _ = _as_matrix(rho)
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    ev = np.linalg.eigvals(m @ yy @ m.conj() @ yy)
    lam = np.sort(np.sqrt(np.clip(ev.real, 0.0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


@dataclass(frozen=True)
class EOFEstimate:
    """Convex-roof upper bound and the decomposition attaining it.

    Attributes
    ----------
    value : float
        Average entanglement entropy (ebits) of the decomposition.
    isometry : ndarray
        ``r x k`` matrix ``M`` with orthonormal rows; term ``j`` is
        ``sum_i M[i, j] sqrt(l_i) |e_i>``.
    weights : ndarray
        Term probabilities.
    states : ndarray
        Normalized term vectors as rows.
    restarts_used : int
    converged : bool
        All restarts stopped on the gradient or step criterion.
    history : ndarray
        Best value after each restart (non-increasing).
    method : str
    """

    value: float
    isometry: np.ndarray
    weights: np.ndarray
    states: np.ndarray
    restarts_used: int
    converged: bool
    cut: tuple
    history: np.ndarray = field(default_factory=lambda: np.zeros(0))
    method: str = "roof"

    def reassemble(self) -> np.ndarray:
        return np.einsum("j,ja,jb->ab", self.weights, self.states, self.states.conj())

    def average_entropy(self) -> float:
        d1, d2 = self.cut
        return float(sum(w * _entropy_of_matrix(s.reshape(d1, d2)) for w, s in zip(self.weights, self.states)))


def _weighted_eigvecs(m: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    keep = w > tol * max(w[-1], 1e-300)
    return np.ascontiguousarray(v[:, keep] * np.sqrt(w[keep]))


def _estimate_from(e: np.ndarray, mm: np.ndarray, cut, restarts, converged, history, method) -> EOFEstimate:
    p = e @ mm
    wts = np.sum(np.abs(p) ** 2, axis=0)
    keep = wts > 1e-300
    states = (p[:, keep] / np.sqrt(wts[keep])).T
    est = EOFEstimate(0.0, mm, wts[keep], states, restarts, converged, cut, history, method)
    return EOFEstimate(est.average_entropy(), mm, wts[keep], states, restarts, converged, cut, history, method)


def convex_roof_eof(
    rho,
    cut: Sequence[int] | None = None,
    ansatz_size: int | None = None,
    restarts: int = 50,
    seed: int = 0,
    maxiter: int = 1000,
    gtol: float = 1e-10,
    separable_shortcut: bool = False,
) -> EOFEstimate:
    """Numerical convex roof of the entanglement entropy.

    Decompositions with ``k`` terms are ``P = E M`` where ``E`` holds the
    ``sqrt(l_i)``-weighted eigenvectors of ``rho`` and ``M`` is ``r x k`` with
    orthonormal rows.  Each restart runs Riemannian gradient descent over
    ``M``; restart 0 starts from the eigen-decomposition, restart ``i > 0``
    from a Gaussian matrix drawn with ``default_rng([seed, i])``.

    Parameters
    ----------
    rho : DensityOperator
    cut : (int, int), optional
        Defaults to ``rho.dims``.
    ansatz_size : int, optional
        Number of terms ``k``; defaults to ``min(r^2, r + 4)``.
    restarts : int
    seed : int
    maxiter, gtol
        Per-restart iteration cap and gradient tolerance.
    separable_shortcut : bool
        Return 0 immediately with an explicit product decomposition when the
        state is certified separable and the decomposition is found.

    Raises
    ------
    PreconditionError
        If ``ansatz_size`` is smaller than the rank.
    """
    if not isinstance(rho, DensityOperator):
        raise TypeError("rho must be a DensityOperator")
    d1, d2 = rho.bipartite(cut)
    e = _weighted_eigvecs(rho.matrix)
    r = e.shape[1]
    k = min(r * r, r + 4) if ansatz_size is None else int(ansatz_size)
    if k < r:
        raise PreconditionError(f"ansatz size {k} below rank {r}")
    if restarts < 1:
        raise ValueError("restarts must be positive")
    if separable_shortcut and r > 1:
        sep = is_separable_exact(rho, (d1, d2), extract=True, seed=seed)
        if sep.separable and sep.decomposition is not None:
            dec = sep.decomposition
            states = np.array([np.kron(a, b) for a, b in zip(dec.aVectors, dec.abVectors)])
            return EOFEstimate(0.0, np.zeros((r, 0)), dec.weights, states, 0, True, (d1, d2),
                               np.zeros(0), "separable")
    if r == 1:
        mm = np.ones((1, 1), dtype=complex)
        return _estimate_from(e, mm, (d1, d2), 1, True, np.zeros(1), "pure")
    starts = np.empty((restarts, r, k), dtype=complex)
    starts[0] = np.eye(r, k)
    for i in range(1, restarts):
        g = np.random.default_rng([seed, i])
        starts[i] = g.normal(size=(r, k)) + 1j * g.normal(size=(r, k))
    values, conv, best = _kernels.roof_search(e, starts, d1, d2, maxiter, gtol, SCHMIDT_CUTOFF)
    history = np.minimum.accumulate(values) / LN2
    return _estimate_from(e, best, (d1, d2), restarts, bool(conv.all()), history, "roof")


def eof(rho: DensityOperator, cut: Sequence[int] | None = None, method: str = "auto",
        restarts: int = 50, seed: int = 0) -> float:
    """EOF by the closed form on two qubits (``auto``/``wootters``) or the convex roof."""
    dims = rho.bipartite(cut)
    if method not in ("auto", "wootters", "roof"):
        raise ValueError(f"unknown method {method!r}")
    if method == "wootters" or (method == "auto" and dims == (2, 2)):
        if dims != (2, 2):
            raise DimensionError("wootters needs a two-qubit cut")
        return wootters_eof(rho)
    return convex_roof_eof(rho, dims, restarts=restarts, seed=seed).value


def regroup_tensor(rho: DensityOperator, sigma: DensityOperator,
                   cut_rho: Sequence[int] | None = None, cut_sigma: Sequence[int] | None = None) -> DensityOperator:
    """``rho (x) sigma`` reordered from ``A B a b`` to ``(A a) (B b)``."""
    da, db = rho.bipartite(cut_rho)
    ea, eb = sigma.bipartite(cut_sigma)
    t = np.kron(rho.matrix, sigma.matrix).reshape(da, db, ea, eb, da, db, ea, eb)
    t = t.transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(da * db * ea * eb, -1)
    return DensityOperator(t, (da * ea, db * eb))


def section_iv_state() -> DensityOperator:
    """``(1/6) I_3 (x) I_2 (x) |Bell><Bell|`` ordered ``(A a)(B b)`` with dims ``(6, 4)``."""
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    rho_ab = DensityOperator(np.eye(6) / 6, (3, 2))
    sig = DensityOperator(np.outer(bell, bell), (2, 2))
    return regroup_tensor(rho_ab, sig)


@dataclass(frozen=True)
class AdditivityReport:
    """``gap = lhs - rhs`` with ``lhs`` the convex-roof estimate of ``E_f(rho (x) sigma)``."""

    lhs: float
    rhs: float
    gap: float
    ef_rho: float
    ef_sigma: float
    verdict: EBVerdict | None = None


def _range_space(rho: DensityOperator) -> BipartiteSubspace:
    d1, d2 = rho.bipartite()
    return BipartiteSubspace.from_vectors(d1, d2, list(rho.range_basis().T))


def _check_range(rho: DensityOperator, space: BipartiteSubspace) -> None:
    for vec in rho.range_basis().T:
        if not space.contains(vec, 1e-8):
            raise CertificateError("state range is not contained in the certified space")


def additivity_check(
    rho_v: DensityOperator,
    sigma: DensityOperator,
    restarts: int = 50,
    seed: int = 0,
    space: BipartiteSubspace | None = None,
    verdict: EBVerdict | None = None,
) -> AdditivityReport:
    """Compare ``E_f(rho_v (x) sigma)`` with ``E_f(rho_v) + E_f(sigma)``.

    ``space`` defaults to the range of ``rho_v``; it is certified unless an
    EB ``verdict`` for it is supplied.

    Raises
    ------
    CertificateError
        If the space is not certified EB or does not contain the range.
    """
    space = _range_space(rho_v) if space is None else space
    _check_range(rho_v, space)
    verdict = certify(space, seed=seed) if verdict is None else verdict
    if verdict.status is not EBStatus.EB:
        raise CertificateError("additivity is not established: space is not certified EB")
    ef_rho = eof(rho_v, restarts=restarts, seed=seed)
    ef_sigma = eof(sigma, restarts=restarts, seed=seed)
    joint = regroup_tensor(rho_v, sigma)
    lhs = convex_roof_eof(joint, restarts=restarts, seed=seed).value
    rhs = ef_rho + ef_sigma
    return AdditivityReport(lhs, rhs, lhs - rhs, ef_rho, ef_sigma, verdict)


def entanglement_cost(
    rho_v: DensityOperator,
    verdict: EBVerdict,
    space: BipartiteSubspace | None = None,
    restarts: int = 50,
    seed: int = 0,
    value: float | None = None,
) -> float:
    """Entanglement cost of a state whose range lies in a certified EB space.

    There the EOF is additive, so the cost equals the EOF; ``value`` reuses a
    precomputed EOF estimate.

    Raises
    ------
    CertificateError
        If ``verdict`` is not an EB certificate (cost not established by this method).
    """
    if verdict.status is not EBStatus.EB:
        raise CertificateError("cost not established by this method")
    if space is not None:
        _check_range(rho_v, space)
    if value is not None:
        return float(value)
    return eof(rho_v, restarts=restarts, seed=seed)


def nonadditive_candidate(a, b, p: float, q: float) -> DensityOperator:
    """``q |psi1><psi1| + (1 - q) |a,1><a,1|`` with ``psi1 ~ sqrt(p)|a,0> + sqrt(1-p)|b,1>``.

    ``a`` and ``b`` are normalized first; ``psi1`` is normalized after
    assembly.

    Raises
    ------
    DomainError
        If ``a`` and ``b`` are parallel or ``p``, ``q`` lie outside ``(0, 1)``.
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size != 2 or b.size != 2:
        raise DimensionError("a and b must be qubit vectors")
    if not (0 < p < 1 and 0 < q < 1):
        raise DomainError("p and q must lie in (0, 1)")
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    if abs(a[0] * b[1] - a[1] * b[0]) < 1e-12:
        raise DomainError("a and b must be linearly independent")
    e0, e1 = np.eye(2)
    psi1 = np.sqrt(p) * np.kron(a, e0) + np.sqrt(1 - p) * np.kron(b, e1)
    psi1 /= np.linalg.norm(psi1)
    a1 = np.kron(a, e1)
    rho = q * np.outer(psi1, psi1.conj()) + (1 - q) * np.outer(a1, a1.conj())
    return DensityOperator(rho, (2, 2))


@dataclass(frozen=True)
class NonadditivityReport:
    """Scan outcome; ``flagged`` lists grid points with gap below ``-slack``."""

    min_gap: float
    argmin: tuple
    gaps: np.ndarray
    grid: tuple
    flagged: list
    slack: float


def scan_nonadditivity(
    grid: int | tuple = 5,
    sigma: DensityOperator | None = None,
    restarts: int = 20,
    seed: int = 0,
    slack: float = 3e-3,
) -> NonadditivityReport:
    """Evaluate ``roof(rho (x) sigma) - E_f(rho) - E_f(sigma)`` over the candidate family.

    ``grid`` is a point count per axis or explicit ``(angles, ps, qs)``
    arrays; ``a = |0>`` and ``b = cos(t)|0> + sin(t)|1>``.  Negative gaps
    beyond ``slack`` are only flagged: the roof is an upper bound, so it
    cannot certify superadditivity.
    """
    if isinstance(grid, int):
        n = grid
        angles = np.linspace(np.pi / 2, np.pi / (2 * n), n)
        ps = np.linspace(0, 1, n + 2)[1:-1]
        qs = np.linspace(0, 1, n + 2)[1:-1]
    else:
        angles, ps, qs = (np.asarray(g, dtype=float) for g in grid)
    if sigma is None:
        bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
        sigma = DensityOperator(np.outer(bell, bell), (2, 2))
    ef_sigma = eof(sigma, restarts=restarts, seed=seed)
    gaps = np.empty((len(angles), len(ps), len(qs)))
    a = np.array([1.0, 0.0])
    for (i, t), (j, p), (k, q) in itertools.product(enumerate(angles), enumerate(ps), enumerate(qs)):
        b = np.array([np.cos(t), np.sin(t)])
        rho = nonadditive_candidate(a, b, p, q)
        lhs = convex_roof_eof(regroup_tensor(rho, sigma), restarts=restarts, seed=seed).value
        gaps[i, j, k] = lhs - wootters_eof(rho) - ef_sigma
    idx = np.unravel_index(np.argmin(gaps), gaps.shape)
    flagged = [
        (float(angles[i]), float(ps[j]), float(qs[k]), float(gaps[i, j, k]))
        for i, j, k in zip(*np.nonzero(gaps < -slack))
    ]
    return NonadditivityReport(float(gaps[idx]), (float(angles[idx[0]]), float(ps[idx[1]]), float(qs[idx[2]])),
                               gaps, (angles, ps, qs), flagged, slack)
