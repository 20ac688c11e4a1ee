"""Normal-form reduction of 2-dim subspaces of C^2 (x) C^3 without product vectors.

Such a subspace is ``(W (x) X) V0`` with ``V0 = span{|00>+|11>, |01>+|12>}``,
``W`` invertible on A and ``X`` invertible on B.  As a tensor on
B (x) (pencil index, A) it reads ``sum_j x_j (x) sym_j`` where ``x_j`` are the
columns of ``X`` and ``sym_0 = |00>``, ``sym_1 = |01>+|10>``, ``sym_2 = |11>``.
A frame change ``G`` acting jointly on the pencil index and on A maps
``X -> X @ sym_matrix(G).T``; a unitary ``U`` on B maps ``X -> U @ X``.
The canonical form has columns ``e0, e1, (d, f e^{i theta}, g)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import SingularReductionError

FRAME_TOL = 1e-9


def sym_matrix(g: np.ndarray) -> np.ndarray:
    """Action of ``g`` in GL(2) on the symmetric tensors ``sym_0, sym_1, sym_2``."""
    a, b = g[0]
    c, e = g[1]
    return np.array(
        [[a * a, 2 * a * b, b * b], [a * c, a * e + b * c, b * e], [c * c, 2 * c * e, e * e]],
        dtype=complex,
    )


def x_from_pencil(m1: np.ndarray, m2: np.ndarray) -> np.ndarray:
    """B-side matrix ``X`` of a 2x3 pencil, up to frame and scale.

    Rows of ``m1`` and ``m2`` are the B-components of A-levels 0 and 1.  The
    kernel vector of ``mu*m1 + lam*m2`` is a quadratic ``k0 mu^2 + k1 mu lam + k2 lam^2``
    whose coefficient matrix inverts to ``X`` in the canonical frame.
    """
    a1, a2 = m1
    b1, b2 = m2
    k0 = np.cross(a1, a2)
    k1 = np.cross(a1, b2) + np.cross(b1, a2)
    k2 = np.cross(b1, b2)
    kmat = np.column_stack([k2, -k1, k0])
    if np.linalg.cond(kmat) > 1e12:
        raise SingularReductionError("kernel polynomial is degenerate")
    return np.linalg.inv(kmat).T


def _triangular_frame(x: np.ndarray) -> tuple[np.ndarray, float, float]:
    # frame in which the first column of X is a common vector of the flag
    u = np.linalg.solve(x, np.array([1.0, 0.0, 0.0], dtype=complex))
    conic = abs(u[1] ** 2 - 4 * u[0] * u[2]) / np.linalg.norm(u) ** 2
    if abs(u[0]) > 1e-9:
        a, b = u[0], u[1] / 2
    else:
        a, b = u[1] / 2, u[2]
    g = np.array([[a, b], [-np.conj(b), np.conj(a)]], dtype=complex)
    xq = x @ sym_matrix(g).T
    lower = abs(xq[2, 1]) / np.linalg.norm(xq)
    return xq, conic, lower


@dataclass(frozen=True)
class Reduction:
    """``X0 = U @ Xn @ S`` for some invertible ``S`` in the image of ``sym_matrix``.

    ``d, f, theta, g`` parametrize ``Xn``; ``unitary`` is ``U``; ``frame``
    names how the frame was chosen.
    """

    d: float
    f: float
    theta: float
    g: float
    unitary: np.ndarray
    frame: str


def canonical_from_x(x: np.ndarray) -> tuple[tuple[float, float, float, float], np.ndarray]:
    """Read ``(d, f, theta, g)`` from ``X`` by QR and the residual frame freedom.

    Returns the parameters and the unitary ``U`` on B with ``X ~ U @ Xn``.
    """
    q, t = np.linalg.qr(x)
    ph = np.diag(t) / np.abs(np.diag(t))
    t = np.diag(ph.conj()) @ t
    q = q @ np.diag(ph)
    if min(abs(t[0, 0]), abs(t[1, 1])) < 1e-12 * np.linalg.norm(t):
        raise SingularReductionError("triangular factor is singular")
    c = -t[0, 1] / t[0, 0]
    x2 = (t[0, 0] / t[1, 1] ** 2) * (c**2 * t[:, 0] + 2 * c * t[:, 1] + t[:, 2])
    dc, fc, gc = x2
    if abs(dc) > 1e-12:
        phi = -np.angle(dc) / 2
    elif abs(fc) > 1e-12:
        phi = -np.angle(fc)
    else:
        phi = 0.0
    fp = np.exp(1j * phi) * fc
    f = abs(fp)
    theta = 0.0
    if f > 1e-12:
        ang = float(np.angle(fp))
        if ang < -1e-15 or ang >= np.pi - 1e-12:
            # phi -> phi + pi keeps d and flips the sign of f e^{i theta}
            phi += np.pi
            ang = float(np.angle(-fp))
        theta = max(ang, 0.0)
    d = abs(dc)
    g = float(gc.real)
    unitary = q @ np.diag([1.0, np.exp(1j * phi), np.exp(2j * phi)])
    return (float(d), float(f), float(theta), g), unitary


def reduce_pencil(m1: np.ndarray, m2: np.ndarray) -> Reduction:
    """Canonical family-3 data of the pencil ``(m1, m2)`` (both 2x3).

    The coordinate frame is used when it is already triangular; otherwise a
    permutation of the B basis is tried, then the generic frame.
    """
    x0 = x_from_pencil(m1, m2)
    for perm in itertools.permutations(range(3)):
        p = np.eye(3)[list(perm)]
        xq, conic, lower = _triangular_frame(p @ x0)
        if conic <= FRAME_TOL and lower <= FRAME_TOL:
            params, u = canonical_from_x(xq)
            name = "native" if perm == (0, 1, 2) else f"permuted{perm}"
            return Reduction(*params, unitary=p.T @ u, frame=name)
    params, u = canonical_from_x(x0)
    return Reduction(*params, unitary=u, frame="generic")


def canonical_pencil(d: float, f: float, theta: float, g: float) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient matrices of ``|00>+|11>`` and ``|01>+|1>(d|0>+f e^{i theta}|1>+g|2>)``."""
    m1 = np.array([[1, 0, 0], [0, 1, 0]], dtype=complex)
    m2 = np.array([[0, 1, 0], [d, f * np.exp(1j * theta), g]], dtype=complex)
    return m1, m2


def equivalence_residual(m1, m2, n1, n2, u: np.ndarray) -> float:
    """How far ``span{m1, m2}`` is from ``span{W n_k U^T}`` for the best invertible ``W``.

    Solves the linear condition ``W n_k U^T in span{m1, m2}`` for ``W`` and
    returns the relative residual of a generic solution (``inf`` when only
    singular ``W`` fit).
    """
    basis = np.column_stack([np.asarray(m1).ravel(), np.asarray(m2).ravel()])
    qb, _ = np.linalg.qr(basis)
    proj_c = np.eye(qb.shape[0]) - qb @ qb.conj().T
    cols = []
    for idx in range(4):
        w = np.zeros(4, dtype=complex)
        w[idx] = 1
        w = w.reshape(2, 2)
        cols.append(np.concatenate([proj_c @ (w @ nk @ u.T).ravel() for nk in (n1, n2)]))
    a = np.column_stack(cols)
    _, s, vh = np.linalg.svd(a)
    wsol = vh[-1].conj().reshape(2, 2)
    if abs(np.linalg.det(wsol)) < 1e-10:
        return float("inf")
    return float(s[-1] / max(s[0], 1e-300))
