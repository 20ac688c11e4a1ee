"""Separability decisions on bipartite density operators.

The exact decision combines the Peres-Horodecki criterion with low-rank
rules applied after restricting the state to its local supports (sizes
``m``, ``n``, rank ``r``):

* ``max(m, n) > r`` forces entanglement;
* PPT is sufficient when ``m*n <= 6``, when ``r <= 3`` or when
  ``r = max(m, n)``;
* any other PPT state is reported as ``Unknown``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .states import DensityOperator, SeparableDecomposition
from .tensor_core import RANK_TOL, column_space, partial_trace, partial_transpose

PPT_TOL = 1e-9

__all__ = [
    "PPT_TOL",
    "ExtractionResult",
    "SepStatus",
    "SeparabilityVerdict",
    "extract_separable_decomposition",
    "is_ppt",
    "is_separable_exact",
    "local_supports",
    "min_pt_eigenvalue",
    "two_qubit_det_criterion",
]


class SepStatus(str, enum.Enum):
    SEPARABLE = "Separable"
    ENTANGLED = "Entangled"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class SeparabilityVerdict:
    """Outcome of :func:`is_separable_exact`.

    ``reason`` is one of ``"rank-deficit"``, ``"npt"``, ``"ppt-small-support"``,
    ``"ppt-rank-le-3"``, ``"ppt-rank-eq-support"``, ``"ppt-undecided"``.
    """

    status: SepStatus
    reason: str
    min_pt_eigenvalue: float
    support: tuple
    rank: int
    decomposition: SeparableDecomposition | None = None

    @property
    def separable(self) -> bool:
        return self.status is SepStatus.SEPARABLE

    @property
    def entangled(self) -> bool:
        return self.status is SepStatus.ENTANGLED


@dataclass(frozen=True)
class ExtractionResult:
    """Best-effort separable decomposition; ``decomposition`` is None on failure."""

    decomposition: SeparableDecomposition | None
    error: float
    terms: int

    @property
    def success(self) -> bool:
        return self.decomposition is not None


def _matrix_and_cut(rho, cut):
    if isinstance(rho, DensityOperator):
        d1, d2 = rho.bipartite(cut)
        return rho.matrix, (d1, d2)
    m = np.asarray(rho, dtype=complex)
    if cut is None:
        raise ValueError("a cut is required for raw matrices")
    return m, (int(cut[0]), int(cut[1]))


def min_pt_eigenvalue(rho, cut: Sequence[int] | None = None) -> float:
    """Smallest eigenvalue of the partial transpose on the second factor."""
    m, dims = _matrix_and_cut(rho, cut)
    g = partial_transpose(m, dims, 1)
    return float(np.linalg.eigvalsh(0.5 * (g + g.conj().T))[0])


def is_ppt(rho, cut: Sequence[int] | None = None, tol: float = PPT_TOL) -> tuple[bool, float]:
    """Peres-Horodecki test.

    Returns
    -------
    flag : bool
        ``min eig(rho^Gamma) >= -tol``.
    min_eig : float
        The minimum eigenvalue itself.

    Examples
    --------
    >>> bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    >>> flag, lam = is_ppt(DensityOperator(np.outer(bell, bell), (2, 2)))
    >>> flag, round(lam, 12)
    (False, -0.5)
    """
    lam = min_pt_eigenvalue(rho, cut)
    return bool(lam >= -tol), lam


def local_supports(m: np.ndarray, dims: tuple[int, int], tol: float = RANK_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases (columns) of the two local supports."""
    r1 = partial_trace(m, dims, [0])
    r2 = partial_trace(m, dims, [1])
    return column_space(r1, tol), column_space(r2, tol)


def is_separable_exact(
    rho,
    cut: Sequence[int] | None = None,
    tol: float = PPT_TOL,
    extract: bool = False,
    seed: int = 0,
) -> SeparabilityVerdict:
    """Exact separability decision where the rank rules allow one.

    Parameters
    ----------
    rho : DensityOperator
        Bipartite state.
    cut : (int, int), optional
        Two-factor grouping of the dimensions; defaults to ``rho.dims``.
    tol : float
        PPT tolerance on the minimum eigenvalue.
    extract : bool
        On a ``Separable`` verdict also attempt an explicit decomposition.
    seed : int
        Seed for the extraction search.
    """
    m, dims = _matrix_and_cut(rho, cut)
    e1, e2 = local_supports(m, dims)
    mdim, ndim = e1.shape[1], e2.shape[1]
    loc = np.kron(e1, e2)
    red = loc.conj().T @ m @ loc
    w = np.linalg.eigvalsh(red)
    r = int(np.sum(w > RANK_TOL * max(w[-1], 1e-300)))
    lam = min_pt_eigenvalue(red, (mdim, ndim))
    if max(mdim, ndim) > r:
        return SeparabilityVerdict(SepStatus.ENTANGLED, "rank-deficit", lam, (mdim, ndim), r)
    if lam < -tol:
        return SeparabilityVerdict(SepStatus.ENTANGLED, "npt", lam, (mdim, ndim), r)
    if mdim * ndim <= 6:
        reason = "ppt-small-support"
    elif r <= 3:
        reason = "ppt-rank-le-3"
    elif r == max(mdim, ndim):
        reason = "ppt-rank-eq-support"
    else:
        return SeparabilityVerdict(SepStatus.UNKNOWN, "ppt-undecided", lam, (mdim, ndim), r)
    dec = None
    if extract:
        res = extract_separable_decomposition(DensityOperator.from_unnormalized(m, dims), seed=seed)
        dec = res.decomposition
    return SeparabilityVerdict(SepStatus.SEPARABLE, reason, lam, (mdim, ndim), r, dec)


def two_qubit_det_criterion(rho, tol: float = 1e-12) -> tuple[bool, float]:
    """Two-qubit separability via ``det(rho^Gamma) >= 0``.

    For two qubits the partial transpose has at most one negative eigenvalue,
    so the sign of its determinant decides separability.
    """
    m, dims = _matrix_and_cut(rho, None if isinstance(rho, DensityOperator) else (2, 2))
    if dims != (2, 2):
        raise ValueError(f"two-qubit state required, got dims {dims}")
    det = float(np.linalg.det(partial_transpose(m, dims, 1)).real)
    return bool(det >= -tol), det


def _rank_one_parts(p: np.ndarray, d1: int, d2: int):
    mats = p.T.reshape(-1, d1, d2)
    u, s, vh = np.linalg.svd(mats)
    y = s[:, 0, None, None] * u[:, :, :1] * vh[:, :1, :]
    return y.reshape(len(mats), -1).T, u[:, :, 0], vh[:, 0, :], s


def _polar(x: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(x, full_matrices=False)
    return u @ vh


def extract_separable_decomposition(
    rho,
    cut: Sequence[int] | None = None,
    seed: int = 0,
    restarts: int = 8,
    maxiter: int = 3000,
    tol: float = 1e-6,
) -> ExtractionResult:
    """Search for ``rho = sum_j q_j |a_j><a_j| (x) |b_j><b_j|`` with at most ``rank+3`` terms.

    Writes the unknown product vectors as ``E @ M`` where ``E`` carries the
    weighted eigenvectors and ``M`` has orthonormal rows, then minimises the
    total non-product weight ``sum_j (||p_j||^2 - s_1(p_j)^2)`` by Riemannian
    gradient steps.  The verdict of :func:`is_separable_exact` never depends on
    this search.

    Returns
    -------
    ExtractionResult
        ``decomposition`` is ``None`` when no candidate reassembles ``rho``
        within ``tol``.
    """
    m, (d1, d2) = _matrix_and_cut(rho, cut)
    w, v = np.linalg.eigh(m)
    keep = w > RANK_TOL * max(w[-1], 1e-300)
    e = v[:, keep] * np.sqrt(w[keep])
    r = e.shape[1]
    rng = np.random.default_rng(seed)
    best_err, best = np.inf, None
    for k in range(r, r + 4):
        for _ in range(restarts):
            mm = _polar(rng.normal(size=(r, k)) + 1j * rng.normal(size=(r, k)))
            step = 1.0
            p = e @ mm
            y, _, _, s = _rank_one_parts(p, d1, d2)
            f = float(np.sum(np.abs(p) ** 2) - np.sum(s[:, 0] ** 2))
            for _ in range(maxiter):
                if f < 1e-22:
                    break
                g = e.conj().T @ (p - y)
                gm = g @ mm.conj().T
                xi = g - 0.5 * (gm + gm.conj().T) @ mm
                gn2 = float(np.sum(np.abs(xi) ** 2))
                moved = False
                while step > 1e-12:
                    trial = _polar(mm - step * xi)
                    pt = e @ trial
                    yt, _, _, st = _rank_one_parts(pt, d1, d2)
                    ft = float(np.sum(np.abs(pt) ** 2) - np.sum(st[:, 0] ** 2))
                    if ft <= f - 1e-4 * step * gn2:
                        mm, p, y, f = trial, pt, yt, ft
                        moved = True
                        break
                    step *= 0.5
                if not moved:
                    break
                step = min(2 * step, 8.0)
            y, ua, vb, s = _rank_one_parts(p, d1, d2)
            weights = s[:, 0] ** 2
            recon = (y @ y.conj().T)
            err = float(np.linalg.norm(recon - m))
            if err < best_err:
                best_err = err
                best = (weights, ua, vb)
            if best_err <= tol:
                break
        if best_err <= tol:
            break
    if best is None or best_err > tol:
        return ExtractionResult(None, best_err, 0)
    weights, ua, vb = best
    nz = weights > 1e-15
    q = weights[nz] / weights[nz].sum()
    dec = SeparableDecomposition(q, ua[nz], vb[nz])
    return ExtractionResult(dec, best_err, int(nz.sum()))
