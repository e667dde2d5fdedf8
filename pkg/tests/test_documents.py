import json

import numpy as np
import pytest

from ctcsim import quantum as q
from ctcsim.documents import DocumentError, dump_document, from_document, load_document, to_document


@pytest.mark.parametrize(
    "obj",
    [
        q.qubit(0.6, 0.8j),
        q.bell_state("phi_minus"),
        q.DensityOperator(np.array([[0.7, 0.1j], [-0.1j, 0.3]])),
        q.standard_gate("CNOT"),
    ],
    ids=["qubit", "bell", "density", "cnot"],
)
def test_round_trip(obj, tmp_path):
    path = tmp_path / "m.json"
    dump_document(obj, path)
    back = load_document(path)
    assert type(back) is type(obj)
    assert back.dims == obj.dims
    a = getattr(obj, "amplitudes", None)
    if a is None:
        np.testing.assert_array_equal(back.matrix, obj.matrix)
    else:
        np.testing.assert_array_equal(back.amplitudes, a)


def test_document_layout():
    doc = to_document(q.qubit(0.6, 0.8j))
    assert doc == {"kind": "state_vector", "dims": [2], "data": [[0.6, 0.0], [0.0, 0.8]]}


@pytest.mark.parametrize(
    "doc, message",
    [
        ([], "JSON object"),
        ({"kind": "state_vector", "dims": [2]}, "missing"),
        ({"kind": "tensor", "dims": [2], "data": []}, "kind"),
        ({"kind": "state_vector", "dims": [0], "data": []}, "dims"),
        ({"kind": "state_vector", "dims": [2], "data": [[1, 0], [0]]}, "pairs"),
        ({"kind": "state_vector", "dims": [2], "data": [[1, 0]]}, "needs 2"),
        ({"kind": "state_vector", "dims": [2], "data": [[1, 0], [1, 0]]}, "normalised"),
        ({"kind": "density", "dims": [2], "data": [[1, 0], [0, 0], [0, 0], [1, 0]]}, "trace"),
        ({"kind": "unitary", "dims": [2], "data": [[1, 0], [1, 0], [0, 0], [1, 0]]}, "unitary"),
    ],
)
def test_validation(doc, message):
    with pytest.raises(DocumentError, match=message):
        from_document(doc)


def test_load_errors(tmp_path):
    with pytest.raises(DocumentError):
        load_document(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(DocumentError):
        load_document(bad)


def test_operator_kind_for_raw_arrays():
    doc = to_document(np.eye(2))
    assert doc["kind"] == "operator"
    json.dumps(doc)
