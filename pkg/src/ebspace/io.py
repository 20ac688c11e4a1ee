"""Space and state documents, canonical JSON, and CSV curve output.

Complex entries are ``[re, im]`` pairs.  Canonical text sorts object keys,
prints floats with ``%.17g`` and ends with a single newline, so an
orthonormal document parses and re-serializes byte for byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import IO, Any, Iterable

import numpy as np

from .errors import DimensionError, EmptySpaceError, ValidationError
from .states import BipartiteSubspace, DensityOperator, PureState

FORMAT_VERSION = 1
SPACE_FORMAT = "ebspace/space"
STATE_FORMAT = "ebspace/state"
CSV_HEADER = "t,eof,eb,ec,evidence"

__all__ = [
    "CSV_HEADER",
    "SpaceDocument",
    "canonical_json",
    "emit_csv",
    "parse_document",
    "parse_space",
    "parse_state",
    "serialize_space",
    "serialize_state",
]


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValidationError("non-finite number in document")
    return "%.17g" % (float(x) + 0.0)


def canonical_json(obj: Any) -> str:
    """Deterministic compact JSON with sorted keys and ``%.17g`` floats."""
    if isinstance(obj, dict):
        items = sorted(obj.items())
        return "{" + ",".join(f"{json.dumps(str(k))}:{canonical_json(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None or isinstance(obj, str):
        return json.dumps(bool(obj) if isinstance(obj, np.bool_) else obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return f"[{_fmt_float(obj.real)},{_fmt_float(obj.imag)}]"
    if isinstance(obj, np.ndarray):
        return canonical_json(obj.tolist())
    raise ValidationError(f"cannot serialize {type(obj).__name__}")


def _encode_vector(vec: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(vec, dtype=complex).ravel()]


def _decode_array(data: Any, what: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{what}: entries must be [re, im] pairs") from exc
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise ValidationError(f"{what}: entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _load(text: str, fmt: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed document: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("document must be a JSON object")
    if doc.get("format") != fmt:
        raise ValidationError(f"expected format {fmt!r}, got {doc.get('format')!r}")
    if doc.get("version") != FORMAT_VERSION:
        raise ValidationError(f"unsupported version {doc.get('version')!r}")
    return doc


@dataclass(frozen=True)
class SpaceDocument:
    """A subspace plus free-form metadata (family id, params, certificate)."""

    space: BipartiteSubspace
    metadata: dict = field(default_factory=dict)

    @property
    def orthonormalized(self) -> bool:
        return self.space.orthonormalized


def parse_document(text: str) -> SpaceDocument:
    """Parse and validate a space document.

    Raises
    ------
    ValidationError
        Malformed structure.
    DimensionError
        Vector length differs from ``dA * dB``.
    EmptySpaceError
        No vectors or only zero vectors.
    """
    doc = _load(text, SPACE_FORMAT)
    try:
        da, db = int(doc["dA"]), int(doc["dB"])
        basis = doc["basis"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"space document missing field: {exc}") from exc
    if da < 1 or db < 1:
        raise DimensionError("dA and dB must be positive")
    if not isinstance(basis, list) or not basis:
        raise EmptySpaceError("basis is empty")
    vecs = []
    for i, raw in enumerate(basis):
        vec = _decode_array(raw, f"basis[{i}]")
        if vec.ndim != 1 or vec.size != da * db:
            raise DimensionError(f"basis[{i}] has length {vec.size}, expected dA*dB = {da * db}")
        vecs.append(vec)
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        raise ValidationError("metadata must be an object")
    return SpaceDocument(BipartiteSubspace.from_vectors(da, db, vecs), meta)


def parse_space(text: str) -> BipartiteSubspace:
    """Subspace of a space document; see :func:`parse_document`."""
    return parse_document(text).space


def serialize_space(space: BipartiteSubspace | SpaceDocument, metadata: dict | None = None) -> str:
    """Canonical text of a space document."""
    if isinstance(space, SpaceDocument):
        metadata = space.metadata if metadata is None else metadata
        space = space.space
    doc = {
        "format": SPACE_FORMAT,
        "version": FORMAT_VERSION,
        "dA": space.dA,
        "dB": space.dB,
        "basis": [_encode_vector(v) for v in space.basis],
        "metadata": metadata or {},
    }
    return canonical_json(doc) + "\n"


def serialize_state(state: DensityOperator | PureState) -> str:
    """Canonical text of a state document holding a density matrix."""
    rho = state.density() if isinstance(state, PureState) else state
    doc = {
        "format": STATE_FORMAT,
        "version": FORMAT_VERSION,
        "dims": list(rho.dims),
        "matrix": [_encode_vector(row) for row in rho.matrix],
    }
    return canonical_json(doc) + "\n"


def parse_state(text: str) -> DensityOperator:
    """Parse a state document with either ``matrix`` or a pure ``vector``."""
    doc = _load(text, STATE_FORMAT)
    try:
        dims = tuple(int(d) for d in doc["dims"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError("state document needs integer dims") from exc
    if "matrix" in doc:
        m = _decode_array(doc["matrix"], "matrix")
        if m.ndim != 2:
            raise ValidationError("matrix must be two-dimensional")
        return DensityOperator(m, dims)
    if "vector" in doc:
        return PureState.from_unnormalized(_decode_array(doc["vector"], "vector"), dims).density()
    raise ValidationError("state document needs 'matrix' or 'vector'")


def _fmt12(x: float) -> str:
    return "%.12g" % (float(x) + 0.0)


def emit_csv(rows: Iterable, sink: IO[str]) -> None:
    """Write curve rows with header ``t,eof,eb,ec,evidence`` and LF endings."""
    lines = [CSV_HEADER]
    for r in rows:
        ec = "n/a" if r.ec is None else _fmt12(r.ec)
        lines.append(",".join([_fmt12(r.t), _fmt12(r.eof), "true" if r.eb else "false", ec, _fmt12(r.evidence)]))
    sink.write("\n".join(lines) + "\n")
