"""Hot loops of the probe optimizer and the convex-roof optimizer.

Each kernel is written once in a numba-compatible numpy subset.  The
``EBSPACE_BACKEND`` environment variable selects how it runs:

``numba`` (default when numba imports)
    kernels are compiled with ``numba.njit``.
``numpy``
    the same source runs as plain numpy code.

The selection happens at import time; :data:`BACKEND` reports the choice.
"""

from __future__ import annotations

import os

import numpy as np

_requested = os.environ.get("EBSPACE_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"EBSPACE_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

BACKEND = "numpy"
if _requested == "numba":
    try:
        import numba

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a declared dependency
        BACKEND = "numpy"


def _jit(fn):
    if BACKEND == "numba":
        return numba.njit(cache=True)(fn)
    return fn


# --------------------------------------------------------------------------
# probe objective: min eigenvalue of the partial transpose of Tr_B |Psi><Psi|
# --------------------------------------------------------------------------


@_jit
def pt_second(rho, d1, d2):
    """Partial transpose of the second tensor factor of a (d1*d2)-square matrix."""
    r4 = np.ascontiguousarray(rho).reshape(d1, d2, d1, d2)
    out = np.ascontiguousarray(np.transpose(r4, (0, 3, 2, 1)))
    return out.reshape(d1 * d2, d1 * d2)


@_jit
def _probe_factor(bm, c, da, db):
    # T[(a,k), b] with sigma = T T^dagger
    k_anc = c.shape[1]
    psi = (bm.T @ c).reshape(da, db, k_anc)
    t = np.ascontiguousarray(np.transpose(psi, (0, 2, 1)))
    return t.reshape(da * k_anc, db)


@_jit
def probe_reduction(bm, c, da, db):
    """Reduced operator on A:ab of the probe ``sum_ik c[i,k] v_i (x) |k>``.

    ``bm`` holds the basis vectors of V as rows, flattened in (A, B) order.
    """
    t = _probe_factor(bm, c, da, db)
    return t @ np.conj(t.T)


@_jit
def probe_value_grad(bm, c, da, db):
    """Minimum PT eigenvalue of the probe reduction and its gradient.

    The gradient ``g`` is taken with respect to ``conj(c)`` so that
    ``df = 2 Re <g, dc>`` at a simple eigenvalue.
    """
    k_anc = c.shape[1]
    t = _probe_factor(bm, c, da, db)
    sigma = t @ np.conj(t.T)
    gam = pt_second(sigma, da, k_anc)
    gam = 0.5 * (gam + np.conj(gam.T))
    w, v = np.linalg.eigh(gam)
    vec = np.ascontiguousarray(v[:, 0])
    z = pt_second(np.outer(vec, np.conj(vec)), da, k_anc)
    zt = z @ t
    g_psi = np.ascontiguousarray(
        np.transpose(zt.reshape(da, k_anc, db), (0, 2, 1))
    ).reshape(da * db, k_anc)
    grad = np.conj(bm) @ g_psi
    return w[0], grad


@_jit
def probe_descent(bm, c0, da, db, maxiter, gtol):
    """Projected gradient descent of the probe objective on the unit sphere.

    Returns ``(c, value, iterations, converged)``.
    """
    c = c0 / np.sqrt(np.sum(np.abs(c0) ** 2))
    val, g = probe_value_grad(bm, c, da, db)
    step = 1.0
    it = 0
    converged = False
    while it < maxiter:
        it += 1
        inner = np.sum(np.conj(c) * g).real
        xi = g - inner * c
        gn = np.sqrt(np.sum(np.abs(xi) ** 2))
        if gn <= gtol:
            converged = True
            break
        accepted = False
        while step > 1e-14:
            trial = c - step * xi
            trial = trial / np.sqrt(np.sum(np.abs(trial) ** 2))
            tval, tg = probe_value_grad(bm, trial, da, db)
            if tval <= val - 1e-4 * step * gn * gn:
                c = trial
                val = tval
                g = tg
                accepted = True
                break
            step *= 0.5
        if not accepted:
            converged = True
            break
        step = min(step * 2.0, 4.0)
    return c, val, it, converged


@_jit
def probe_search(bm, starts, da, db, maxiter, gtol, stop_below):
    """Run :func:`probe_descent` from each start, stopping at a deep enough minimum.

    Returns per-start values (NaN for starts not run), the index of the best
    start and its coefficients.
    """
    n = starts.shape[0]
    values = np.full(n, np.nan)
    best = 0
    best_c = np.ascontiguousarray(starts[0])
    best_val = np.inf
    for r in range(n):
        c, val, _, _ = probe_descent(bm, np.ascontiguousarray(starts[r]), da, db, maxiter, gtol)
        values[r] = val
        if val < best_val:
            best_val = val
            best = r
            best_c = c
        if val < stop_below:
            break
    return values, best, best_c


# --------------------------------------------------------------------------
# convex roof: average entanglement entropy of P = E M, with M M^dagger = I
# --------------------------------------------------------------------------


@_jit
def roof_value_grad(e, m, da, db, cutoff):
    """Average entropy (nats) of the decomposition ``P = e @ m`` and its gradient.

    Columns of ``e`` are sqrt(lambda_i)-weighted eigenvectors of the target.
    Schmidt weights below ``cutoff`` times the term weight are discarded, which
    makes product terms contribute exactly zero.  Gradient is with respect to
    ``conj(m)``.
    """
    n = e.shape[0]
    k = m.shape[1]
    p = e @ m
    gp = np.zeros((n, k), dtype=np.complex128)
    total = 0.0
    for j in range(k):
        col = np.ascontiguousarray(p[:, j]).reshape(da, db)
        u, s, vh = np.linalg.svd(col)
        s2 = s * s
        w = np.sum(s2)
        if w <= 0.0:
            continue
        keep = s2 > cutoff * w
        wk = np.sum(s2[keep])
        h = 0.0
        for l in range(s.shape[0]):
            if keep[l]:
                q = s2[l] / wk
                h -= q * np.log(q)
        total += wk * h
        gmat = np.zeros((da, db), dtype=np.complex128)
        lw = np.log(wk)
        for l in range(s.shape[0]):
            if keep[l]:
                coef = (lw - np.log(s2[l])) * s[l]
                gmat += coef * np.outer(u[:, l], vh[l, :])
        gp[:, j] = gmat.reshape(da * db)
    grad = np.conj(e.T) @ gp
    return total, grad


@_jit
def _polar(x):
    u, _, vh = np.linalg.svd(x, full_matrices=False)
    return u @ vh


@_jit
def roof_descent(e, m0, da, db, maxiter, gtol, cutoff):
    """Riemannian gradient descent over co-isometries ``m`` (``m m^dagger = I``).

    Returns ``(m, value_nats, iterations, converged)``.
    """
    m = _polar(m0)
    val, g = roof_value_grad(e, m, da, db, cutoff)
    step = 1.0
    it = 0
    converged = False
    while it < maxiter:
        it += 1
        gm = g @ np.conj(m.T)
        sym = 0.5 * (gm + np.conj(gm.T))
        xi = g - sym @ m
        gn = np.sqrt(np.sum(np.abs(xi) ** 2))
        if gn <= gtol:
            converged = True
            break
        accepted = False
        while step > 1e-14:
            trial = _polar(m - step * xi)
            tval, tg = roof_value_grad(e, trial, da, db, cutoff)
            if tval <= val - 1e-4 * step * gn * gn:
                m = trial
                val = tval
                g = tg
                accepted = True
                break
            step *= 0.5
        if not accepted:
            converged = True
            break
        step = min(step * 2.0, 4.0)
    return m, val, it, converged


@_jit
def roof_search(e, starts, da, db, maxiter, gtol, cutoff):
    """Run :func:`roof_descent` from every start; return per-start values and best ``m``."""
    n = starts.shape[0]
    values = np.empty(n)
    best_val = np.inf
    best_m = np.ascontiguousarray(starts[0])
    conv = np.zeros(n, dtype=np.bool_)
    for r in range(n):
        m, val, _, ok = roof_descent(e, np.ascontiguousarray(starts[r]), da, db, maxiter, gtol, cutoff)
        values[r] = val
        conv[r] = ok
        if val < best_val:
            best_val = val
            best_m = m
    return values, conv, best_m
