"""Dense complex linear algebra on small tensor-product spaces.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; subsystem
dimensions are passed as tuples of ints and flattening is row-major, so the
first listed subsystem is the most significant index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, PreconditionError, ValidationError

RANK_TOL = 1e-9
HERMITIAN_TOL = 1e-10

__all__ = [
    "RANK_TOL",
    "MatrixPencil",
    "RankOnePoints",
    "as_dims",
    "column_space",
    "hermitian_eigs",
    "kron",
    "null_space",
    "numerical_rank",
    "partial_trace",
    "partial_transpose",
    "pencil_rank_one_points",
    "schmidt_decompose",
]


def as_dims(dims: Sequence[int], size: int | None = None) -> tuple[int, ...]:
    """Validate a dimension tuple, optionally against an ambient size."""
    out = tuple(int(d) for d in dims)
    if not out or any(d < 1 for d in out):
        raise DimensionError(f"subsystem dimensions must be positive, got {dims}")
    if size is not None and int(np.prod(out)) != size:
        raise DimensionError(f"dims {out} do not multiply to {size}")
    return out


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product ``a (x) b``."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def _square(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {rho.shape}")
    return rho


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Parameters
    ----------
    rho : ndarray
        Square operator on ``prod(dims)`` dimensions.
    dims : sequence of int
        Subsystem dimensions.
    keep : sequence of int
        Indices of the subsystems to keep, in the order they appear in the
        output.

    Returns
    -------
    ndarray
        Reduced operator on the kept subsystems.

    Examples
    --------
    >>> bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    >>> np.round(partial_trace(np.outer(bell, bell), (2, 2), [0]).real, 12)
    array([[0.5, 0. ],
           [0. , 0.5]])
    """
    rho = _square(rho)
    dims = as_dims(dims, rho.shape[0])
    keep = [int(k) for k in keep]
    if len(set(keep)) != len(keep) or any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionError(f"invalid subsystem selection {keep} for dims {dims}")
    n = len(dims)
    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for i in traced:
        col[i] = row[i]
    out_idx = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    red = np.einsum("".join(row) + "".join(col) + "->" + out_idx, t)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return red.reshape(dk, dk)


def partial_transpose(rho: np.ndarray, dims: Sequence[int], subsystem: int | Sequence[int]) -> np.ndarray:
    """Transpose the listed subsystem(s) of ``rho`` in the computational basis."""
    rho = _square(rho)
    dims = as_dims(dims, rho.shape[0])
    subs = [subsystem] if np.isscalar(subsystem) else list(subsystem)
    n = len(dims)
    for s in subs:
        if not 0 <= int(s) < n:
            raise DimensionError(f"subsystem {s} out of range for dims {dims}")
    t = rho.reshape(dims + dims)
    perm = list(range(2 * n))
    for s in subs:
        s = int(s)
        perm[s], perm[n + s] = perm[n + s], perm[s]
    return t.transpose(perm).reshape(rho.shape)


def hermitian_eigs(m: np.ndarray, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending.

    Raises
    ------
    ValidationError
        If ``m`` deviates from its adjoint by more than ``tol`` (relative to
        its norm, floored at 1).
    """
    m = _square(m)
    scale = max(1.0, float(np.linalg.norm(m)))
    if np.linalg.norm(m - m.conj().T) > tol * scale:
        raise ValidationError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return w[::-1].copy(), v[:, ::-1].copy()


def schmidt_decompose(psi: np.ndarray, dims: Sequence[int]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Schmidt decomposition ``psi = sum_k s_k a_k (x) b_k``.

    Returns
    -------
    coefficients : ndarray
        Nonzero Schmidt coefficients, descending.
    a_basis, b_basis : ndarray
        Columns are the matching Schmidt vectors.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    d1, d2 = as_dims(dims, psi.size)
    u, s, vh = np.linalg.svd(psi.reshape(d1, d2), full_matrices=False)
    r = numerical_rank(np.diag(s)) if s.size and s[0] > 0 else 0
    r = max(r, 1) if psi.any() else 0
    return s[:r], u[:, :r], vh[:r].T


def numerical_rank(m: np.ndarray, tol: float = RANK_TOL) -> int:
    """Number of singular values above ``tol`` times the largest one."""
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def column_space(m: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the range of ``m``."""
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    if m.size == 0 or not np.any(m):
        return np.zeros((m.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    r = int(np.sum(s > tol * s[0]))
    return u[:, :r]


def null_space(m: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the kernel of ``m``."""
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    _, s, vh = np.linalg.svd(m)
    r = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    return vh[r:].conj().T


@dataclass(frozen=True)
class MatrixPencil:
    """Two equally shaped matrices spanning ``mu*M1 + lam*M2``."""

    M1: np.ndarray
    M2: np.ndarray

    def __post_init__(self):
        m1 = np.asarray(self.M1, dtype=complex)
        m2 = np.asarray(self.M2, dtype=complex)
        if m1.shape != m2.shape or m1.ndim != 2:
            raise DimensionError("pencil matrices must be 2-D with equal shapes")
        object.__setattr__(self, "M1", m1)
        object.__setattr__(self, "M2", m2)

    def at(self, mu: complex, lam: complex) -> np.ndarray:
        return mu * self.M1 + lam * self.M2


@dataclass(frozen=True)
class RankOnePoints:
    """Result of :func:`pencil_rank_one_points`.

    ``points`` are unit vectors ``(mu, lam)`` with a real nonnegative leading
    nonzero entry.  ``continuum`` is set when every member has rank <= 1.
    """

    points: list = field(default_factory=list)
    continuum: bool = False


def _quad_coeffs(m1: np.ndarray, m2: np.ndarray) -> np.ndarray:
    rows = []
    p, q = m1.shape
    for i in range(p):
        for i2 in range(i + 1, p):
            for j in range(q):
                for j2 in range(j + 1, q):
                    a = m1[[i, i2]][:, [j, j2]]
                    b = m2[[i, i2]][:, [j, j2]]
                    mixed = a[0, 0] * b[1, 1] + a[1, 1] * b[0, 0] - a[0, 1] * b[1, 0] - a[1, 0] * b[0, 1]
                    rows.append((np.linalg.det(a), mixed, np.linalg.det(b)))
    return np.array(rows, dtype=complex).reshape(-1, 3)


def _normalize_point(mu: complex, lam: complex) -> tuple[complex, complex]:
    v = np.array([mu, lam], dtype=complex)
    v /= np.linalg.norm(v)
    lead = v[0] if abs(v[0]) > 1e-12 else v[1]
    v *= np.conj(lead) / abs(lead)
    return complex(v[0]), complex(v[1])


def _binary_quadratic_roots(a: complex, b: complex, c: complex) -> list[tuple[complex, complex]]:
    # roots [mu:lam] of a mu^2 + b mu lam + c lam^2
    scale = max(abs(a), abs(b), abs(c))
    a, b, c = a / scale, b / scale, c / scale
    if abs(a) >= abs(c):
        # mu = t * lam ; a t^2 + b t + c = 0, with a possible root at lam = 0 when a vanishes
        if abs(a) < 1e-14:
            return [(1.0, 0.0)] if abs(b) < 1e-14 else [(1.0, 0.0), (-c, b)]
        return [(complex(t), 1.0) for t in np.roots([a, b, c])]
    return [(1.0, complex(t)) for t in np.roots([c, b, a])]


def pencil_rank_one_points(p: MatrixPencil, tol: float = RANK_TOL, verify_tol: float = 1e-7) -> RankOnePoints:
    """Projective points ``[mu:lam]`` at which ``mu*M1 + lam*M2`` has rank one.

    Every 2x2 minor of the pencil is a binary quadratic form in (mu, lam).  A
    point is rank one iff all of them vanish, which reduces to a linear-algebra
    question on the stacked coefficient vectors: rank 3 admits no common root,
    rank 2 fixes ``(mu^2, mu*lam, lam^2)`` up to scale, rank 1 leaves the roots
    of a single form, and rank 0 means every member has rank <= 1.  Candidates
    are verified by SVD.

    Examples
    --------
    >>> e = np.eye(2)
    >>> res = pencil_rank_one_points(MatrixPencil(np.outer(e[0], e[0]), np.outer(e[1], e[1])))
    >>> sorted((round(abs(m), 6), round(abs(l), 6)) for m, l in res.points)
    [(0.0, 1.0), (1.0, 0.0)]
    """
    m1, m2 = p.M1, p.M2
    if numerical_rank(np.stack([m1.ravel(), m2.ravel()]), tol) < 2:
        raise PreconditionError("pencil matrices are linearly dependent")
    scale = max(np.linalg.norm(m1), np.linalg.norm(m2))
    m1, m2 = m1 / scale, m2 / scale
    coeffs = _quad_coeffs(m1, m2)
    if coeffs.shape[0] == 0:
        return RankOnePoints([], continuum=True)
    s = np.linalg.svd(coeffs, compute_uv=False)
    if s[0] <= tol:
        return RankOnePoints([], continuum=True)
    r = int(np.sum(s > tol * max(s[0], 1.0)))
    candidates: list[tuple[complex, complex]] = []
    if r == 1:
        _, _, vh = np.linalg.svd(coeffs)
        a, b, c = vh[0]
        candidates = _binary_quadratic_roots(a, b, c)
    elif r == 2:
        _, _, vh = np.linalg.svd(coeffs)
        n = vh[2].conj()
        # coeffs @ (mu^2, mu lam, lam^2) = 0, so n must lie on the conic n0 n2 = n1^2
        if abs(n[0] * n[2] - n[1] ** 2) <= 1e-6:
            candidates = [(n[0], n[1])] if abs(n[0]) >= abs(n[2]) else [(n[1], n[2])]
    pts: list[tuple[complex, complex]] = []
    for mu, lam in candidates:
        mu, lam = _normalize_point(mu, lam)
        sv = np.linalg.svd(mu * m1 + lam * m2, compute_uv=False)
        if sv[0] > 0 and (sv.size < 2 or sv[1] <= verify_tol * sv[0]):
            if not any(abs(abs(np.vdot([mu, lam], q)) - 1) < 1e-9 for q in pts):
                pts.append((mu, lam))
    return RankOnePoints(pts, continuum=False)
