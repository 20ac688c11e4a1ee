"""Constructions of EB spaces and the reference fixtures."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .certify import Family3Params, family3_inequality
from .errors import DomainError, ValidationError
from .states import BipartiteSubspace, ProbeState, ProductOperator, PureState

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)

__all__ = [
    "DirectSumFamilyParams",
    "Family2xnParams",
    "Fixtures",
    "apply_pi",
    "b_direct_sum",
    "family3_is_eb",
    "family3_space",
    "family_2xn_space",
    "family_3dim_3N",
    "fixtures",
    "ket",
    "lift_counterexample",
    "saturating_space",
    "tensor_product_space",
]


def ket(dA: int, dB: int, *terms: tuple[complex, int, int]) -> np.ndarray:
    """Vector ``sum c |a, b>`` from ``(c, a, b)`` triples."""
    v = np.zeros(dA * dB, dtype=complex)
    for c, a, b in terms:
        v[a * dB + b] += c
    return v


def saturating_space(n: int, a_vecs: Sequence[np.ndarray]) -> BipartiteSubspace:
    """``span{|a_i, i>}`` in ``C^m (x) C^n``.

    Raises
    ------
    ValidationError
        If any ``a_i`` is zero or the count differs from ``n``.
    """
    a_vecs = [np.asarray(a, dtype=complex).ravel() for a in a_vecs]
    if len(a_vecs) != n:
        raise ValidationError(f"need {n} A-vectors, got {len(a_vecs)}")
    if any(np.linalg.norm(a) == 0 for a in a_vecs):
        raise ValidationError("A-vectors must be nonzero")
    m = a_vecs[0].size
    eye = np.eye(n)
    return BipartiteSubspace.from_vectors(m, n, [np.kron(a / np.linalg.norm(a), eye[i]) for i, a in enumerate(a_vecs)])


def _pair_tensor(x: np.ndarray, y: np.ndarray, dims1: tuple[int, int], dims2: tuple[int, int]) -> np.ndarray:
    t = np.einsum("ab,cd->acbd", x.reshape(dims1), y.reshape(dims2))
    return t.reshape(-1)


def tensor_product_space(v: BipartiteSubspace, w: BipartiteSubspace) -> BipartiteSubspace:
    """``V (x) W`` regrouped as ``(A1 A2) : (B1 B2)``, basis ordered ``(i, j)`` row-major."""
    vecs = [_pair_tensor(x, y, (v.dA, v.dB), (w.dA, w.dB)) for x in v.basis for y in w.basis]
    return BipartiteSubspace(v.dA * w.dA, v.dB * w.dB, np.array(vecs))


def lift_counterexample(probe: ProbeState, w: BipartiteSubspace) -> ProbeState:
    """Counterexample for ``V (x) W`` from one for ``V``: the probe times ``|w_0>``.

    The reduction becomes ``sigma (x) Tr_B2 |w_0><w_0|`` with A2 grouped into
    A, which stays NPT.
    """
    vw = tensor_product_space(probe.space, w)
    c = np.zeros((probe.space.dim * w.dim, probe.ancilla_dim), dtype=complex)
    for i in range(probe.space.dim):
        c[i * w.dim] = probe.coeffs[i]
    return ProbeState(vw, c)


def b_direct_sum(spaces: Sequence[BipartiteSubspace]) -> BipartiteSubspace:
    """Direct sum with each summand's B side placed in consecutive orthogonal blocks."""
    if not spaces:
        raise ValidationError("need at least one space")
    da = spaces[0].dA
    if any(s.dA != da for s in spaces):
        raise ValidationError("B-direct sum needs a common A system")
    tot = sum(s.dB for s in spaces)
    vecs = []
    off = 0
    for s in spaces:
        for m in s.matrices:
            big = np.zeros((da, tot), dtype=complex)
            big[:, off : off + s.dB] = m
            vecs.append(big.ravel())
        off += s.dB
    return BipartiteSubspace(da, tot, np.array(vecs))


@dataclass(frozen=True)
class DirectSumFamilyParams:
    """Parameters of the 3-dim family in ``C^m (x) C^{3N}``.

    ``a_vecs``, ``b_vecs``, ``c_vecs`` hold ``N - 2`` tail vectors in ``C^m``.
    """

    m: int
    N: int
    x: tuple
    a_vecs: tuple = field(default=())
    b_vecs: tuple = field(default=())
    c_vecs: tuple = field(default=())

    def __post_init__(self):
        if self.m < 3 or self.N < 2:
            raise DomainError("need m >= 3 and N >= 2")
        x = tuple(complex(v) for v in self.x)
        if len(x) != 3:
            raise DomainError("x needs three entries")
        if min(abs(v) for v in x) < SQRT2 - 1e-12:
            raise DomainError("|x_j| must be at least sqrt(2)")
        object.__setattr__(self, "x", x)
        tails = []
        for name in ("a_vecs", "b_vecs", "c_vecs"):
            vecs = tuple(np.asarray(t, dtype=complex).ravel() for t in getattr(self, name))
            if not vecs:
                vecs = tuple(np.zeros(self.m, dtype=complex) for _ in range(self.N - 2))
            if len(vecs) != self.N - 2 or any(t.size != self.m for t in vecs):
                raise DomainError(f"{name} needs {self.N - 2} vectors of length {self.m}")
            tails.append(vecs)
        object.__setattr__(self, "a_vecs", tails[0])
        object.__setattr__(self, "b_vecs", tails[1])
        object.__setattr__(self, "c_vecs", tails[2])


def family_3dim_3N(p: DirectSumFamilyParams) -> BipartiteSubspace:
    """The 3-dim EB family in ``C^m (x) C^{3N}`` (requires ``|x_j| >= sqrt(2)``).

    Generators, with levels ``3(i+1) + j`` carrying the tails::

        |1,2> + |2,1> + x_0 |0,3> + sum_i |a_i, 3(i+1)>
        |2,0> + |0,2> + x_1 |1,4> + sum_i |b_i, 3(i+1)+1>
        |0,1> + |1,0> + x_2 |2,5> + sum_i |c_i, 3(i+1)+2>
    """
    m, nb = p.m, 3 * p.N
    pairs = ((1, 2), (2, 0), (0, 1))
    tails = (p.a_vecs, p.b_vecs, p.c_vecs)
    gens = []
    for j, (s, t) in enumerate(pairs):
        mat = np.zeros((m, nb), dtype=complex)
        mat[s, t] += 1
        mat[t, s] += 1
        mat[j, 3 + j] += p.x[j]
        for i, vec in enumerate(tails[j], start=1):
            mat[:, 3 * (i + 1) + j] += vec
        gens.append(mat.ravel())
    return BipartiteSubspace.from_vectors(m, nb, gens)


def family3_space(p: Family3Params, m: int = 2) -> BipartiteSubspace:
    """``span{|00>+|11>, |01>+|1>(d|0>+f e^{i theta}|1>+g|2>)}`` in ``C^m (x) C^3``.

    Raises
    ------
    DomainError
        If ``g <= 0`` or ``m < 2``.
    """
    if p.g <= 0:
        raise DomainError("family 3 needs g > 0")
    if m < 2:
        raise DomainError("family 3 needs m >= 2")
    v1 = ket(m, 3, (1, 0, 0), (1, 1, 1))
    v2 = ket(m, 3, (1, 0, 1), (p.d, 1, 0), (p.f * np.exp(1j * p.theta), 1, 1), (p.g, 1, 2))
    return BipartiteSubspace.from_vectors(m, 3, [v1, v2])


def family3_is_eb(p: Family3Params, tol: float = 1e-9) -> bool:
    """EB flag of a family-3 member: the inequality holds (boundary included)."""
    return family3_inequality(p) >= -tol


@dataclass(frozen=True)
class Family2xnParams:
    """Pairs ``a, b, c, d`` of the 4-level family in ``C^2 (x) C^4``."""

    a: tuple
    b: tuple
    c: tuple
    d: tuple

    def __post_init__(self):
        for name in "abcd":
            val = tuple(complex(t) for t in getattr(self, name))
            if len(val) != 2:
                raise DomainError(f"{name} must be a pair")
            object.__setattr__(self, name, val)
        if abs(self.det) <= 1e-9:
            raise DomainError("determinant condition violated")

    @property
    def det(self) -> complex:
        a, b, c, d = self.a, self.b, self.c, self.d
        return a[0] * b[1] * c[1] * d[0] - a[1] * b[0] * c[0] * d[1]


def family_2xn_space(p: Family2xnParams) -> BipartiteSubspace:
    """``span{|00> + b0 |a>|2> + d0 |c>|3>, |11> + b1 |a>|2> + d1 |c>|3>}``."""
    a = np.array(p.a)
    c = np.array(p.c)
    e = np.eye(4)
    v1 = np.kron([1, 0], e[0]) + p.b[0] * np.kron(a, e[2]) + p.d[0] * np.kron(c, e[3])
    v2 = np.kron([0, 1], e[1]) + p.b[1] * np.kron(a, e[2]) + p.d[1] * np.kron(c, e[3])
    return BipartiteSubspace.from_vectors(2, 4, [v1, v2])


@dataclass(frozen=True)
class Fixtures:
    """Reference spaces, operators and states.

    Attributes
    ----------
    spaceU : BipartiteSubspace
        3-dim space in ``C^3 (x) C^6``.
    spaceU2 : BipartiteSubspace
        Span of the first two generators of ``spaceU``.
    spaceV : BipartiteSubspace
        2-dim space in ``C^2 (x) C^3``.
    spaceV6 : BipartiteSubspace
        ``spaceV`` with B embedded into the first three levels of ``C^6``.
    operatorW : ProductOperator
        Maps ``spaceU2`` onto ``spaceV6`` (A: 3 -> 2, B: 6 -> 6).
    operatorPi : tuple of ndarray
        Factors on A, B and ab bringing ``probeV`` to the family-3 normal form.
    probeV : ProbeState
        Equal-weight probe on ``spaceV`` with ancilla dimension 2.
    tensor_rank_332 : list of PureState
        Six canonical 3x3x2 tensors, one per SLOCC class of local ranks (3,3,2).
    """

    spaceU: BipartiteSubspace
    spaceU2: BipartiteSubspace
    spaceV: BipartiteSubspace
    spaceV6: BipartiteSubspace
    operatorW: ProductOperator
    operatorPi: tuple
    probeV: ProbeState
    tensor_rank_332: list


def _tensor332(*terms: tuple[int, int, int]) -> PureState:
    v = np.zeros(18, dtype=complex)
    for a, b, c in terms:
        v[(a * 3 + b) * 2 + c] += 1
    return PureState.from_unnormalized(v, (3, 3, 2))


def fixtures() -> Fixtures:
    """Build all fixtures from their closed-form coefficients."""
    u_vecs = [
        0.5 * ket(3, 6, (1, 1, 2), (1, 2, 1), (SQRT2, 0, 3)),
        0.5 * ket(3, 6, (1, 2, 0), (1, 0, 2), (SQRT2, 1, 4)),
        0.5 * ket(3, 6, (1, 0, 1), (1, 1, 0), (SQRT2, 2, 5)),
    ]
    v_vecs = [
        ket(2, 3, (1 / SQRT3, 0, 2), (-SQRT2 / SQRT3, 1, 0)),
        ket(2, 3, (-1 / SQRT3, 1, 2), (SQRT2 / SQRT3, 0, 1)),
    ]
    space_u = BipartiteSubspace(3, 6, np.array(u_vecs))
    space_u2 = BipartiteSubspace(3, 6, np.array(u_vecs[:2]))
    space_v = BipartiteSubspace(2, 3, np.array(v_vecs))
    pad = np.eye(6)[:, :3]
    space_v6 = space_v.embedded(np.eye(2), pad)
    wa = np.zeros((2, 3))
    wa[0, 1], wa[1, 0] = 1, -1
    wb = np.zeros((6, 6))
    for r, c in ((0, 3), (1, 4), (2, 2), (4, 1), (3, 0), (5, 5)):
        wb[r, c] = 1
    op_w = ProductOperator(wa, wb, bUnitary=True)
    # B and ab factors act with rows as inputs, i.e. as the transposes of their displayed arrays
    pi_a = (SQRT3 / SQRT2) * np.array([[1, 0], [0, -SQRT2]])
    pi_b = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]]).T
    pi_ab = np.array([[0, SQRT2], [1, 0]]).T
    probe = ProbeState(space_v, np.eye(2) / SQRT2)
    t332 = [
        _tensor332((0, 0, 0), (1, 1, 1), (2, 2, 0)),
        _tensor332((0, 0, 0), (1, 1, 1), (2, 2, 0), (2, 2, 1)),
        _tensor332((1, 0, 0), (0, 1, 0), (1, 2, 1), (2, 1, 1)),
        _tensor332((0, 0, 1), (1, 0, 0), (0, 1, 0), (1, 2, 1), (2, 1, 1)),
        _tensor332((0, 0, 1), (1, 0, 0), (0, 1, 0), (2, 2, 0)),
        _tensor332((0, 0, 1), (1, 0, 0), (0, 1, 0), (2, 2, 1)),
    ]
    return Fixtures(space_u, space_u2, space_v, space_v6, op_w, (pi_a, pi_b, pi_ab), probe, t332)


def apply_pi(fx: Fixtures) -> np.ndarray:
    """``Pi |Psi_1>`` as a tensor indexed ``[B, A, ab]``."""
    # unnormalized probe |0>_V|0> + |1>_V|1>
    psi = np.einsum("ik,iab->abk", fx.probeV.coeffs * SQRT2, fx.spaceV.matrices)
    pa, pb, pab = fx.operatorPi
    out = np.einsum("ia,jb,kc,abc->ijk", pa, pb, pab, psi)
    return out.transpose(1, 0, 2)

