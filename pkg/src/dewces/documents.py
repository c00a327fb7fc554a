"""JSON documents for matrices, subspaces, product families and witnesses.

Complex entries are ``[re, im]`` pairs; ``data`` is a list of rows.  Row
layouts per kind:

* ``matrix`` / ``witness``: ``mn`` rows of length ``mn``.
* ``subspace``: one row of length ``mn`` per basis vector.
* ``product_family``: one row ``e ++ f`` (length ``m + n``) per member.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .prodvec_families import FamilySample, ProductFamily
from .subspaces import Subspace, orthonormalize
from .tensor_core import BipartiteDims, ProductVector
from .witness import Provenance, Witness

KINDS = ("matrix", "subspace", "product_family", "witness")


class DocumentError(ValueError):
    """Malformed or inconsistent document."""


@dataclass
class MatrixDocument:
    kind: str
    dims: BipartiteDims
    data: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DocumentError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        data = np.asarray(self.data, dtype=complex)
        if data.size == 0:
            data = data.reshape(0, self._row_length())
        if data.ndim != 2:
            raise DocumentError("data must be a list of rows")
        width = self._row_length()
        if data.shape[1] != width:
            raise DocumentError(f"{self.kind} rows must have length {width}, got {data.shape[1]}")
        if self.kind in ("matrix", "witness") and data.shape[0] != width:
            raise DocumentError(f"{self.kind} must be {width}x{width}")
        self.data = data

    def _row_length(self) -> int:
        if self.kind == "product_family":
            return self.dims.m + self.dims.n
        return self.dims.total

    def __eq__(self, other) -> bool:
        return (isinstance(other, MatrixDocument) and self.kind == other.kind
                and self.dims == other.dims and self.metadata == other.metadata
                and self.data.shape == other.data.shape and bool(np.array_equal(self.data, other.data)))

    def to_json_obj(self) -> dict:
        return {
            "kind": self.kind,
            "dims": {"m": self.dims.m, "n": self.dims.n},
            "data": encode_rows(self.data),
            "metadata": self.metadata,
        }

    def dumps(self, indent: int | None = None) -> str:
        return json.dumps(self.to_json_obj(), indent=indent, sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj) -> "MatrixDocument":
        if not isinstance(obj, dict):
            raise DocumentError("document must be a JSON object")
        try:
            kind, dims, data = obj["kind"], obj["dims"], obj["data"]
            bd = BipartiteDims(int(dims["m"]), int(dims["n"]))
        except (KeyError, TypeError) as exc:
            raise DocumentError(f"missing or malformed field: {exc}") from exc
        except ValueError as exc:
            raise DocumentError(str(exc)) from exc
        metadata = obj.get("metadata", {})
        if not isinstance(metadata, dict):
            raise DocumentError("metadata must be an object")
        return cls(kind, bd, decode_rows(data), metadata)

    @classmethod
    def loads(cls, text: str) -> "MatrixDocument":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from exc
        return cls.from_json_obj(obj)


def encode_vector(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex).ravel()]


def encode_rows(M) -> list:
    return [encode_vector(row) for row in np.atleast_2d(np.asarray(M, dtype=complex))]


def decode_vector(pairs) -> np.ndarray:
    try:
        arr = np.asarray(pairs, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DocumentError("entries must be [re, im] number pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DocumentError("entries must be [re, im] number pairs")
    if not np.all(np.isfinite(arr)):
        raise DocumentError("entries must be finite")
    return arr[:, 0] + 1j * arr[:, 1]


def decode_rows(rows) -> np.ndarray:
    if not isinstance(rows, list):
        raise DocumentError("data must be a list of rows")
    if not rows:
        return np.zeros((0, 0), dtype=complex)
    decoded = [decode_vector(r) for r in rows]
    if len({len(r) for r in decoded}) != 1:
        raise DocumentError("rows have different lengths")
    return np.array(decoded)


def encode_product_vector(pv: ProductVector) -> dict:
    return {"e": encode_vector(pv.e), "f": encode_vector(pv.f)}


# -- conversions between documents and library objects ----------------------------


def from_matrix(M, dims: BipartiteDims, metadata: dict | None = None) -> MatrixDocument:
    return MatrixDocument("matrix", dims, M, dict(metadata or {}))


def from_subspace(V: Subspace, metadata: dict | None = None) -> MatrixDocument:
    return MatrixDocument("subspace", V.dims, V.basis, dict(metadata or {}))


def from_family(fam: ProductFamily, metadata: dict | None = None) -> MatrixDocument:
    meta = {"charts": [s.chart for s in fam.samples], "certified": fam.certified}
    meta.update(metadata or {})
    rows = np.array([np.concatenate([s.pv.e, s.pv.f]) for s in fam.samples]) if len(fam) else []
    return MatrixDocument("product_family", fam.dims, rows, meta)


def from_witness(W: Witness, metadata: dict | None = None) -> MatrixDocument:
    meta = dict(metadata or {})
    if W.provenance is not None and W.provenance.a == 0:
        meta["Q"] = encode_rows(W.provenance.Q)
    return MatrixDocument("witness", W.dims, W.matrix, meta)


def to_subspace(doc: MatrixDocument) -> Subspace:
    """Subspace spanned by the rows; non-orthonormal rows are orthonormalized."""
    if doc.kind != "subspace":
        raise DocumentError(f"expected a subspace document, got {doc.kind!r}")
    if doc.data.shape[0] == 0:
        raise DocumentError("subspace document has no basis vectors")
    B = doc.data
    if np.abs(B.conj() @ B.T - np.eye(B.shape[0])).max() <= 1e-10:
        return Subspace(doc.dims, B, dict(doc.metadata))
    V = orthonormalize(B, doc.dims)
    V.meta.update(doc.metadata)
    return V


def to_family(doc: MatrixDocument) -> ProductFamily:
    if doc.kind != "product_family":
        raise DocumentError(f"expected a product_family document, got {doc.kind!r}")
    m = doc.dims.m
    charts = doc.metadata.get("charts", ["affine"] * doc.data.shape[0])
    samples = [FamilySample((), c, ProductVector(row[:m], row[m:])) for row, c in zip(doc.data, charts)]
    return ProductFamily(doc.dims, samples, bool(doc.metadata.get("certified", False)))


def to_witness(doc: MatrixDocument) -> Witness:
    """A ``witness`` document, with ``Q`` provenance when ``metadata.Q`` is present."""
    if doc.kind != "witness":
        raise DocumentError(f"expected a witness document, got {doc.kind!r}")
    prov = None
    if "Q" in doc.metadata:
        Q = decode_rows(doc.metadata["Q"])
        if Q.shape != doc.data.shape:
            raise DocumentError("metadata.Q has the wrong shape")
        prov = Provenance(0.0, np.zeros_like(Q), Q)
    return Witness(doc.data, doc.dims, prov)
