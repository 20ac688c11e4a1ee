"""Two-atom Tavis-Cummings evolution in the sector ``C^2 (x) C^2 (x) C^3``.

The atoms ``A``, ``B`` start in ``alpha|00> + beta|11>`` and the cavity
``C`` in the vacuum.  With ``tau = sqrt(6) g_c t``,

* ``c1 = -(sqrt(2)/3) beta (1 - cos tau)``
* ``c2 = -(i/sqrt(3)) beta sin tau``
* ``c3 = beta (1 - (1 - cos tau)/3)``
* ``c4 = alpha``

and ``|psi(t)> = c1|00>|2> + (c2/sqrt2)(|01>+|10>)|1> + c3|11>|0> + c4|00>|0>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .certify import (
    EBStatus,
    Family3Params,
    certify_mx3_dim2,
    choi_reduction,
)
from .eof import convex_roof_eof
from .errors import SingularTimeError, ValidationError
from .separability import min_pt_eigenvalue
from .states import BipartiteSubspace, DensityOperator, PureState, reduced_state

SINGULAR_TOL = 1e-10
SQRT6 = np.sqrt(6.0)

__all__ = [
    "CurveRow",
    "TCCoefficients",
    "TCParams",
    "tc_coefficients",
    "tc_curve",
    "tc_family3_params",
    "tc_range_space",
    "tc_rho_AC",
    "tc_state",
]


@dataclass(frozen=True)
class TCParams:
    """Real amplitudes ``alpha``, ``beta``, coupling ``g_c > 0`` and time ``t >= 0``."""

    alpha: float
    beta: float
    coupling: float = 1.0
    time: float = 0.0

    def __post_init__(self):
        if abs(self.alpha**2 + self.beta**2 - 1) > 1e-12:
            raise ValidationError("alpha^2 + beta^2 must equal 1")
        if not self.coupling > 0:
            raise ValidationError("coupling must be positive")
        if self.time < 0:
            raise ValidationError("time must be non-negative")

    @property
    def tau(self) -> float:
        return float(SQRT6 * self.coupling * self.time)

    def at(self, t: float) -> "TCParams":
        return replace(self, time=float(t))


@dataclass(frozen=True)
class TCCoefficients:
    c1: complex
    c2: complex
    c3: complex
    c4: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3, self.c4], dtype=complex)


def tc_coefficients(p: TCParams) -> TCCoefficients:
    """Closed-form amplitudes at time ``p.time``.

    Examples
    --------
    >>> c = tc_coefficients(TCParams(0.6, 0.8))
    >>> c.as_array().real.round(12).tolist()
    [0.0, 0.0, 0.8, 0.6]
    """
    cos, sin = np.cos(p.tau), np.sin(p.tau)
    b = p.beta
    return TCCoefficients(
        complex(-np.sqrt(2) / 3 * b * (1 - cos)),
        complex(-1j / np.sqrt(3) * b * sin),
        complex(b * (1 - (1 - cos) / 3)),
        complex(p.alpha),
    )


def tc_state(p: TCParams) -> PureState:
    """``|psi(t)>`` as a 12-dim vector in subsystem order ``(A, B, C)``."""
    c = tc_coefficients(p)
    psi = np.zeros((2, 2, 3), dtype=complex)
    psi[0, 0, 2] = c.c1
    psi[0, 1, 1] = psi[1, 0, 1] = c.c2 / np.sqrt(2)
    psi[1, 1, 0] = c.c3
    psi[0, 0, 0] = c.c4
    return PureState(psi.ravel(), (2, 2, 3))


def tc_rho_AC(p: TCParams) -> DensityOperator:
    """Qubit-qutrit state ``Tr_B |psi(t)><psi(t)|`` with dims ``(2, 3)``."""
    return reduced_state(tc_state(p), (0, 2))


def _range_vectors(c: TCCoefficients) -> tuple[np.ndarray, np.ndarray]:
    # B = 0 and B = 1 branches of |psi>, written in (A, C) order
    u0 = np.zeros((2, 3), dtype=complex)
    u0[0, 0], u0[0, 2], u0[1, 1] = c.c4, c.c1, c.c2 / np.sqrt(2)
    u1 = np.zeros((2, 3), dtype=complex)
    u1[0, 1], u1[1, 0] = c.c2 / np.sqrt(2), c.c3
    return u0.ravel(), u1.ravel()


def tc_range_space(p: TCParams) -> BipartiteSubspace:
    """Range of :func:`tc_rho_AC` as a subspace of ``C^2 (x) C^3``.

    Raises
    ------
    SingularTimeError
        If the range is one-dimensional (``beta = 0``).
    """
    rho = tc_rho_AC(p)
    if rho.rank() < 2:
        raise SingularTimeError("range of rho_AC is one-dimensional")
    return BipartiteSubspace.from_vectors(2, 3, list(rho.range_basis().T))


def tc_family3_params(p: TCParams) -> Family3Params:
    """Family-3 normal form of the range of ``rho_AC`` at a regular time.

    ``d = 2|c3 c4|/|c2|^2``, ``f = 0``, ``theta = 0`` and
    ``g = 2|c1 c3|/|c2|^2``.  ``is_eb`` of the result is
    ``family3_inequality(params) >= -tol``.

    Raises
    ------
    SingularTimeError
        If ``|c2| <= 1e-10``; certify :func:`tc_range_space` directly instead.
    """
    c = tc_coefficients(p)
    n2 = abs(c.c2) ** 2
    if abs(c.c2) <= SINGULAR_TOL:
        raise SingularTimeError(f"c2 vanishes at t={p.time}")
    return Family3Params(2 * abs(c.c3 * c.c4) / n2, 0.0, 0.0, 2 * abs(c.c1 * c.c3) / n2)


@dataclass(frozen=True)
class CurveRow:
    """``ec`` is ``None`` (written as ``n/a``) unless ``eb`` is true.

    ``evidence`` is the minimum PT eigenvalue of the identity-probe reduction
    of the range; it is non-negative exactly on EB times.
    """

    t: float
    eof: float
    eb: bool
    ec: float | None
    evidence: float
    route: str = field(default="", compare=False)

    def __post_init__(self):
        if (self.ec is not None) != self.eb:
            raise ValidationError("ec must be present iff eb is true")


def _eb_flag(p: TCParams, tol: float, seed: int) -> tuple[bool, float, str]:
    try:
        space = tc_range_space(p)
    except SingularTimeError:
        # rank-1 range: a single pure state spans an EB ray
        return True, 0.0, "rank1"
    sigma = choi_reduction(space)
    evidence = min_pt_eigenvalue(sigma)
    try:
        params = tc_family3_params(p)
    except SingularTimeError:
        v = certify_mx3_dim2(space, tol=tol, seed=seed)
        return v.status is EBStatus.EB, evidence, f"direct:{v.route}"
    return bool(params.lhs >= -tol), evidence, "family3-map"


def tc_curve(
    p0: TCParams,
    t_grid: Sequence[float],
    restarts: int = 30,
    seed: int = 0,
    tol: float = 1e-9,
    maxiter: int = 1000,
) -> list[CurveRow]:
    """EOF, EB flag and entanglement cost along a time grid.

    Every grid point is optimized independently with the same ``seed``, so
    a row depends only on its own ``rho_AC(t)``.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0:
        raise ValueError("time grid is empty")
    rows = []
    for t in t_grid:
        p = p0.at(t)
        rho = tc_rho_AC(p)
        value = convex_roof_eof(rho, (2, 3), restarts=restarts, seed=seed, maxiter=maxiter).value
        eb, evidence, route = _eb_flag(p, tol, seed)
        rows.append(CurveRow(float(t), value, eb, value if eb else None, evidence, route))
    return rows
