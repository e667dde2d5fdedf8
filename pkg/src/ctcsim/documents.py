"""JSON matrix documents used for CLI input and output.

A document is an object ``{"kind": ..., "dims": [...], "data": [[re, im], ...]}``
with ``data`` row-major. ``kind`` is ``state_vector`` (``prod(dims)``
entries), ``density`` or ``unitary`` (``prod(dims)**2`` entries). Reports
may also contain ``operator`` documents for matrices with no invariant to
check (e.g. the post-selection contraction); those are not accepted as input.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .exceptions import InvalidStateError
from .quantum import DensityOperator, PureState, UnitaryGate

KINDS = ("state_vector", "density", "unitary")


class DocumentError(ValueError):
    """A matrix document is malformed or violates its kind's invariants."""


def _pairs(values: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values).reshape(-1)]


def to_document(obj) -> dict[str, Any]:
    if isinstance(obj, PureState):
        return {"kind": "state_vector", "dims": list(obj.dims), "data": _pairs(obj.amplitudes)}
    if isinstance(obj, DensityOperator):
        return {"kind": "density", "dims": list(obj.dims), "data": _pairs(obj.matrix)}
    if isinstance(obj, UnitaryGate):
        return {"kind": "unitary", "dims": list(obj.dims), "data": _pairs(obj.matrix)}
    m = np.asarray(obj, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise TypeError(f"cannot serialise object of shape {m.shape}")
    return {"kind": "operator", "dims": [m.shape[0]], "data": _pairs(m)}


def from_document(doc: dict[str, Any]):
    """Validate a document and build the matching state or gate."""
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    missing = {"kind", "dims", "data"} - set(doc)
    if missing:
        raise DocumentError(f"document is missing {sorted(missing)}")
    kind = doc["kind"]
    if kind not in KINDS:
        raise DocumentError(f"kind must be one of {KINDS}, got {kind!r}")
    dims = doc["dims"]
    if not isinstance(dims, list) or not dims or not all(
        isinstance(d, int) and not isinstance(d, bool) and d > 0 for d in dims
    ):
        raise DocumentError("dims must be a non-empty array of positive integers")
    data = doc["data"]
    if not isinstance(data, list) or not all(
        isinstance(p, list) and len(p) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in p)
        for p in data
    ):
        raise DocumentError("data must be an array of [re, im] number pairs")
    n = math.prod(dims)
    expected = n if kind == "state_vector" else n * n
    if len(data) != expected:
        raise DocumentError(f"{kind} with dims {dims} needs {expected} entries, got {len(data)}")
    values = np.array([complex(re, im) for re, im in data], dtype=np.complex128)
    try:
        if kind == "state_vector":
            return PureState(values, tuple(dims))
        if kind == "density":
            return DensityOperator(values.reshape(n, n), tuple(dims))
        return UnitaryGate(values.reshape(n, n), tuple(dims))
    except (InvalidStateError, ValueError) as exc:
        raise DocumentError(f"invalid {kind}: {exc}") from exc


def load_document(path: str | Path):
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path} is not valid JSON: {exc}") from exc
    return from_document(doc)


def dump_document(obj, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_document(obj), indent=2))
