"""State, subspace and probe types, plus the product-operator action.

Subsystem order for probes is fixed as (A, B, ab): a probe lives in
``V (x) H_ab`` and ``B`` is the subsystem that gets traced out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import DimensionError, EmptySpaceError, ValidationError
from .tensor_core import RANK_TOL, as_dims, column_space, hermitian_eigs, partial_trace

STATE_TOL = 1e-10

__all__ = [
    "BipartiteSubspace",
    "DensityOperator",
    "ProbeState",
    "ProductOperator",
    "PureState",
    "SeparableDecomposition",
    "apply_product_operator",
    "identity_probe",
    "probe_to_vector",
    "purify",
    "random_probe",
    "reduced_after_trace_B",
    "reduced_state",
    "subspace_distance",
]


@dataclass(frozen=True)
class PureState:
    """Unit vector with declared subsystem dimensions."""

    amplitudes: np.ndarray
    dims: tuple

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).ravel()
        dims = as_dims(self.dims, amp.size)
        nrm = np.linalg.norm(amp)
        if abs(nrm - 1.0) > STATE_TOL:
            raise ValidationError(f"state norm {nrm} differs from 1")
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_unnormalized(cls, amplitudes, dims) -> "PureState":
        amp = np.asarray(amplitudes, dtype=complex).ravel()
        nrm = np.linalg.norm(amp)
        if nrm == 0:
            raise ValidationError("zero vector cannot be normalized")
        return cls(amp / nrm, dims)

    def density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace operator."""

    matrix: np.ndarray
    dims: tuple

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got {m.shape}")
        dims = as_dims(self.dims, m.shape[0])
        if np.linalg.norm(m - m.conj().T) > STATE_TOL:
            raise ValidationError("density matrix is not Hermitian")
        m = 0.5 * (m + m.conj().T)
        tr = np.trace(m).real
        if abs(tr - 1.0) > STATE_TOL:
            raise ValidationError(f"density matrix trace {tr} differs from 1")
        if np.linalg.eigvalsh(m)[0] < -STATE_TOL:
            raise ValidationError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_unnormalized(cls, matrix, dims) -> "DensityOperator":
        m = np.asarray(matrix, dtype=complex)
        m = 0.5 * (m + m.conj().T)
        return cls(m / np.trace(m).real, dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def rank(self, tol: float = RANK_TOL) -> int:
        w = np.linalg.eigvalsh(self.matrix)
        return int(np.sum(w > tol * max(w[-1], 1e-300)))

    def range_basis(self, tol: float = RANK_TOL) -> np.ndarray:
        """Orthonormal eigenvectors (columns) spanning the range."""
        w, v = hermitian_eigs(self.matrix)
        return v[:, w > tol * max(w[0], 1e-300)]

    def bipartite(self, cut: Sequence[int] | None = None) -> tuple[int, int]:
        """Resolve a two-factor cut; defaults to the declared dims."""
        if cut is None:
            if len(self.dims) != 2:
                raise DimensionError(f"state has dims {self.dims}; a two-factor cut is required")
            return self.dims
        d1, d2 = as_dims(cut, self.dim)
        return d1, d2

    def tensor(self, other: "DensityOperator") -> "DensityOperator":
        return DensityOperator(np.kron(self.matrix, other.matrix), self.dims + other.dims)


@dataclass(frozen=True)
class BipartiteSubspace:
    """Subspace of ``C^dA (x) C^dB`` held as an orthonormal basis.

    ``basis`` has shape ``(dim, dA*dB)``; rows are basis vectors flattened in
    (A, B) order.  Use :meth:`from_vectors` for arbitrary spanning sets.
    """

    dA: int
    dB: int
    basis: np.ndarray
    orthonormalized: bool = field(default=False, compare=False)

    def __post_init__(self):
        b = np.atleast_2d(np.asarray(self.basis, dtype=complex))
        if b.shape[1] != self.dA * self.dB:
            raise DimensionError(f"basis vectors have length {b.shape[1]}, expected {self.dA * self.dB}")
        if not 1 <= b.shape[0] <= self.dA * self.dB:
            raise EmptySpaceError("subspace dimension must be at least one")
        if np.linalg.norm(b @ b.conj().T - np.eye(b.shape[0])) > STATE_TOL:
            raise ValidationError("basis is not orthonormal")
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "dA", int(self.dA))
        object.__setattr__(self, "dB", int(self.dB))

    @classmethod
    def from_vectors(cls, dA: int, dB: int, vectors: Iterable, tol: float = RANK_TOL) -> "BipartiteSubspace":
        """Span of arbitrary vectors, orthonormalized.

        An already orthonormal set is kept verbatim (``orthonormalized`` is
        then ``False``), so serialization round trips are exact.
        """
        vecs = np.atleast_2d(np.array([np.asarray(v, dtype=complex).ravel() for v in vectors]))
        if vecs.shape[1] != dA * dB:
            raise DimensionError(f"vectors have length {vecs.shape[1]}, expected {dA * dB}")
        if not np.all(np.linalg.norm(vecs, axis=1) > 0):
            raise EmptySpaceError("zero vector in spanning set")
        gram = vecs @ vecs.conj().T
        if np.linalg.norm(gram - np.eye(len(vecs))) <= STATE_TOL:
            return cls(dA, dB, vecs, orthonormalized=False)
        q = column_space(vecs.T, tol)
        if q.shape[1] == 0:
            raise EmptySpaceError("spanning set is zero")
        # Gram-Schmidt orientation: keep the first vector's direction when possible
        q, _ = np.linalg.qr(_aligned(vecs, q))
        return cls(dA, dB, q.T.copy(), orthonormalized=True)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def matrices(self) -> np.ndarray:
        """Basis vectors reshaped into ``(dim, dA, dB)`` coefficient matrices."""
        return self.basis.reshape(self.dim, self.dA, self.dB)

    def projector(self) -> np.ndarray:
        return self.basis.T @ self.basis.conj()

    def a_support(self, tol: float = RANK_TOL) -> np.ndarray:
        """Orthonormal columns spanning the A-side support."""
        return column_space(np.hstack(list(self.matrices)), tol)

    def b_support(self, tol: float = RANK_TOL) -> np.ndarray:
        """Orthonormal columns spanning the B-side support."""
        return column_space(np.hstack([m.T for m in self.matrices]), tol)

    def restricted(self, ea: np.ndarray, eb: np.ndarray) -> "BipartiteSubspace":
        """Coordinates in orthonormal A- and B-bases ``ea``, ``eb`` (columns)."""
        mats = np.einsum("ia,kab,bj->kij", ea.conj().T, self.matrices, eb.conj())
        return BipartiteSubspace(ea.shape[1], eb.shape[1], mats.reshape(self.dim, -1))

    def embedded(self, ea: np.ndarray, eb: np.ndarray) -> "BipartiteSubspace":
        """Inverse of :meth:`restricted`: map coordinates back into ``C^|ea| (x) C^|eb|``."""
        mats = np.einsum("ai,kij,bj->kab", ea, self.matrices, eb)
        return BipartiteSubspace(ea.shape[0], eb.shape[0], mats.reshape(self.dim, -1))

    def contains(self, vec: np.ndarray, tol: float = 1e-8) -> bool:
        vec = np.asarray(vec, dtype=complex).ravel()
        resid = vec - self.basis.T @ (self.basis.conj() @ vec)
        return bool(np.linalg.norm(resid) <= tol * max(np.linalg.norm(vec), 1e-300))


def _aligned(vecs: np.ndarray, q: np.ndarray) -> np.ndarray:
    # order-preserving basis of span(vecs): greedy pick of independent input vectors
    chosen = []
    for v in vecs:
        cand = np.array(chosen + [v])
        if np.linalg.matrix_rank(cand, tol=RANK_TOL * max(np.linalg.norm(cand), 1.0)) == len(cand):
            chosen.append(v)
        if len(chosen) == q.shape[1]:
            break
    return np.array(chosen).T


@dataclass(frozen=True)
class ProductOperator:
    """Local operator ``opA (x) opB``; ``bUnitary`` asserts ``opB`` is unitary."""

    opA: np.ndarray
    opB: np.ndarray
    bUnitary: bool = True

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.opA, dtype=complex))
        b = np.atleast_2d(np.asarray(self.opB, dtype=complex))
        if self.bUnitary and (
            b.shape[0] != b.shape[1] or np.linalg.norm(b.conj().T @ b - np.eye(b.shape[1])) > STATE_TOL
        ):
            raise ValidationError("opB is flagged unitary but is not")
        object.__setattr__(self, "opA", a)
        object.__setattr__(self, "opB", b)

    def matrix(self) -> np.ndarray:
        return np.kron(self.opA, self.opB)


def apply_product_operator(v: BipartiteSubspace, op: ProductOperator) -> BipartiteSubspace:
    """Span of ``(opA (x) opB)|v_i>``, re-orthonormalized.

    Raises
    ------
    EmptySpaceError
        If every image vanishes.
    """
    if op.opA.shape[1] != v.dA or op.opB.shape[1] != v.dB:
        raise DimensionError("operator shape does not match the subspace")
    imgs = np.einsum("ia,kab,jb->kij", op.opA, v.matrices, op.opB)
    imgs = imgs.reshape(v.dim, -1)
    q = column_space(imgs.T)
    if q.shape[1] == 0:
        raise EmptySpaceError("product operator annihilates the subspace")
    return BipartiteSubspace.from_vectors(op.opA.shape[0], op.opB.shape[0], list(q.T))


def subspace_distance(v1: BipartiteSubspace, v2: BipartiteSubspace) -> float:
    """Operator-norm distance between the orthogonal projectors onto ``v1`` and ``v2``."""
    if (v1.dA, v1.dB) != (v2.dA, v2.dB) or v1.dim != v2.dim:
        raise DimensionError("subspaces must share ambient dims and dimension")
    return float(np.linalg.norm(v1.projector() - v2.projector(), 2))


@dataclass(frozen=True)
class ProbeState:
    """Pure state ``sum_{i,k} coeffs[i,k] |v_i> (x) |k>`` in ``V (x) H_ab``."""

    space: BipartiteSubspace
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.coeffs, dtype=complex))
        if c.shape[0] != self.space.dim or c.shape[1] < 1:
            raise DimensionError(f"coefficient shape {c.shape} incompatible with dim {self.space.dim}")
        if abs(np.linalg.norm(c) - 1.0) > STATE_TOL:
            raise ValidationError("probe coefficients must have unit Frobenius norm")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def normalized(cls, space: BipartiteSubspace, coeffs) -> "ProbeState":
        c = np.atleast_2d(np.asarray(coeffs, dtype=complex))
        return cls(space, c / np.linalg.norm(c))

    @property
    def ancilla_dim(self) -> int:
        return self.coeffs.shape[1]


def random_probe(space: BipartiteSubspace, rng: np.random.Generator, ancilla_dim: int | None = None) -> ProbeState:
    """Haar-like random probe; ancilla dimension defaults to ``dim(V)``."""
    k = space.dim if ancilla_dim is None else int(ancilla_dim)
    c = rng.normal(size=(space.dim, k)) + 1j * rng.normal(size=(space.dim, k))
    return ProbeState.normalized(space, c)


def probe_to_vector(p: ProbeState) -> PureState:
    """Amplitudes of a probe with subsystem order (A, B, ab)."""
    v = p.space
    psi = np.einsum("ik,iab->abk", p.coeffs, v.matrices)
    return PureState(psi.ravel(), (v.dA, v.dB, p.ancilla_dim))


def reduced_after_trace_B(p: ProbeState) -> DensityOperator:
    """``Tr_B |Psi><Psi|`` on A:ab with dims ``(dA, ancilla_dim)``."""
    v = p.space
    sigma = _kernels.probe_reduction(
        np.ascontiguousarray(v.basis), np.ascontiguousarray(p.coeffs), v.dA, v.dB
    )
    return DensityOperator(sigma, (v.dA, p.ancilla_dim))


def purify(rho: DensityOperator, tol: float = RANK_TOL) -> PureState:
    """Purification with ancilla dimension equal to the numerical rank.

    The output has dims ``rho.dims + (rank,)`` and amplitudes
    ``sum_i sqrt(l_i) |e_i> (x) |i>``.
    """
    w, v = hermitian_eigs(rho.matrix)
    keep = w > tol * max(w[0], 1e-300)
    w, v = w[keep], v[:, keep]
    psi = (v * np.sqrt(w)).reshape(-1)
    psi = psi / np.linalg.norm(psi)
    return PureState(psi, tuple(rho.dims) + (int(keep.sum()),))


def identity_probe(space: BipartiteSubspace) -> ProbeState:
    """The maximally entangled probe ``dim(V)^{-1/2} sum_i |v_i>|i>``."""
    return ProbeState(space, np.eye(space.dim) / np.sqrt(space.dim))


@dataclass(frozen=True)
class SeparableDecomposition:
    """``sum_n q_n |mu_n><mu_n| (x) |nu_n><nu_n|``.

    ``aVectors`` and ``abVectors`` hold unit vectors as rows.
    """

    weights: np.ndarray
    aVectors: np.ndarray
    abVectors: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.weights, dtype=float).ravel()
        if abs(q.sum() - 1.0) > STATE_TOL or np.any(q < -STATE_TOL):
            raise ValidationError("weights must form a probability vector")
        object.__setattr__(self, "weights", q)
        object.__setattr__(self, "aVectors", np.atleast_2d(np.asarray(self.aVectors, dtype=complex)))
        object.__setattr__(self, "abVectors", np.atleast_2d(np.asarray(self.abVectors, dtype=complex)))

    def __len__(self) -> int:
        return self.weights.size

    def reassemble(self) -> np.ndarray:
        out = 0
        for q, a, b in zip(self.weights, self.aVectors, self.abVectors):
            x = np.kron(a, b)
            out = out + q * np.outer(x, x.conj())
        return out


def reduced_state(psi: PureState, keep: Sequence[int]) -> DensityOperator:
    """Density operator of ``psi`` on the kept subsystems."""
    rho = partial_trace(np.outer(psi.amplitudes, psi.amplitudes.conj()), psi.dims, keep)
    return DensityOperator(rho, tuple(psi.dims[k] for k in keep))
