import json

import numpy as np
import pytest

from contactify import dynamics
from contactify._checks import ContactifyError, InvariantViolation
from contactify.serialization import (
    CSV_HEADER,
    dumps,
    matrix_from_json,
    matrix_to_json,
    trajectory_from_csv,
    trajectory_to_csv,
)


def test_matrix_json_round_trip(rng):
    z = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    A = z + z.conj().T
    obj = json.loads(json.dumps(matrix_to_json(A, "hermitian")))
    np.testing.assert_array_equal(matrix_from_json(obj), A)


def test_matrix_json_validation():
    with pytest.raises(InvariantViolation):
        matrix_from_json({"kind": "hermitian", "n": 2, "re": [[0, 1], [0, 0]], "im": [[0, 0], [0, 0]]})
    with pytest.raises(ContactifyError):
        matrix_from_json({"kind": "hermitian", "n": 3, "re": [[1, 0], [0, 1]]})
    with pytest.raises(ContactifyError):
        matrix_from_json({"kind": "symmetric", "n": 1, "re": [[1]]})
    with pytest.raises(ContactifyError):
        matrix_from_json({"n": 1})


def test_dumps_is_deterministic_and_valid_json():
    obj = {"b": [0.1, 1 / 3, True, None], "a": {"x": 2, "s": "q\"uote"}}
    text = dumps(obj)
    assert text == dumps(obj)
    assert json.loads(text) == obj
    assert "0.33333333333333331" in text
    with pytest.raises(ContactifyError):
        dumps(float("nan"))


def test_csv_round_trip():
    H = dynamics.linear_z()
    traj = dynamics.el_flow(H, np.array([0.6, 0.8j]), 0.5, 0.01)
    text = trajectory_to_csv(traj)
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    back = trajectory_from_csv(text)
    np.testing.assert_array_equal(back.states, traj.states)
    np.testing.assert_array_equal(back.hhat, traj.hhat)
    assert trajectory_to_csv(back) == text
    assert dynamics.action_functional(back) == dynamics.action_functional(traj)


def test_csv_rejects_bad_input():
    with pytest.raises(ContactifyError, match="header"):
        trajectory_from_csv("t,x\n0,1\n")
    with pytest.raises(ContactifyError):
        trajectory_from_csv(",".join(CSV_HEADER) + "\n0,1,0,0,0,0,0,1\n")
    with pytest.raises(ContactifyError):
        trajectory_from_csv(",".join(CSV_HEADER) + "\n0,a,0,0,0,0,0,1,0.5\n")
    with pytest.raises(InvariantViolation):
        trajectory_from_csv(",".join(CSV_HEADER) + "\n0,2,0,0,0,0,0,1,0.5\n")
