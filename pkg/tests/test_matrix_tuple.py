import json

import numpy as np
import pytest

from ncseries.errors import PreconditionError
from ncseries.matrix_tuple import MatrixTuple


def test_json_round_trip(rng):
    M = MatrixTuple(rng.normal(size=(2, 3, 3)) + 1j * rng.normal(size=(2, 3, 3)))
    back = MatrixTuple.from_json(M.to_json())
    assert np.array_equal(back.matrices, M.matrices)


def test_real_documents():
    M = MatrixTuple([[[1.0, 2.0], [3.0, 4.0]]])
    doc = json.loads(M.to_json("real"))
    assert doc["matrices"] == [[1.0, 2.0, 3.0, 4.0]]
    assert np.array_equal(MatrixTuple.from_json(M.to_json("real")).matrices, M.matrices)
    with pytest.raises(PreconditionError):
        MatrixTuple([[[1j]]]).to_json("real")


def test_nested_rows_and_center():
    doc = {"n": 1, "k": 2, "matrices": [[[[0, 0], [1, 0]], [[0, 0], [0, 0]]]], "center": [[[1, 0], [0, 0], [0, 0], [1, 0]]]}
    M = MatrixTuple.from_dict(doc)
    assert M[0][0, 1] == 1
    assert np.array_equal(M.center[0], np.eye(2))
    assert np.array_equal(M.centered()[0], M[0] - np.eye(2))


def test_malformed_documents():
    with pytest.raises(ValueError):
        MatrixTuple.from_json("{")
    with pytest.raises(ValueError):
        MatrixTuple.from_json('{"n": 1, "k": 2, "matrices": [[1, 2, 3]]}')
    with pytest.raises(ValueError):
        MatrixTuple.from_json('{"n": 2, "k": 1, "matrices": [[1]]}')
    with pytest.raises(PreconditionError):
        MatrixTuple(np.zeros((2, 2, 3)))


def test_products_and_arithmetic():
    M = MatrixTuple([[[0, 1], [0, 0]], [[0, 0], [1, 0]]])
    assert np.array_equal(M.product((1, 2)), [[1, 0], [0, 0]])
    assert np.array_equal(M.product(()), np.eye(2))
    assert M.max_norm() == 1.0
    assert (M + M).max_norm() == (2 * M).max_norm() == 2.0
    assert M.is_real()
