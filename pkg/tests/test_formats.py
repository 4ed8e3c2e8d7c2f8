import numpy as np
import pytest

from hera.errors import ShapeError
from hera.field import FieldMatrix, hermitian_field
from hera.formats import (
    FormatError,
    matrix_from_csv,
    matrix_to_csv,
    parse_config,
    read_matrix,
    write_matrix,
)


def test_csv_round_trip(tmp_path):
    spec = hermitian_field(3)
    M = FieldMatrix.random(spec, 3, 4, np.random.default_rng(0))
    text = matrix_to_csv(M)
    assert text.splitlines()[:2] == ["# field 3,2,2:2:1", "3,4"]
    assert matrix_from_csv(text) == M
    write_matrix(tmp_path / "m.csv", M)
    assert read_matrix(tmp_path / "m.csv", spec) == M


def test_headerless_needs_spec():
    with pytest.raises(FormatError):
        matrix_from_csv("1,1\n0\n")
    assert matrix_from_csv("1,2\n0,3\n", hermitian_field(2)).tolist() == [[0, 3]]


@pytest.mark.parametrize(
    "text,err",
    [
        ("# field 2,2,1:1:1\n2,2\n1,2\n", ShapeError),
        ("# field 2,2,1:1:1\n1,2\n1,x\n", FormatError),
        ("# field 2,2,1:1:1\n1,1\n7\n", FormatError),
        ("# field 2,2,1:1:1\n", FormatError),
    ],
)
def test_bad_matrices(text, err):
    with pytest.raises(err):
        matrix_from_csv(text)


def test_field_mismatch():
    with pytest.raises(FormatError):
        matrix_from_csv("# field 2,2,1:1:1\n1,1\n0\n", hermitian_field(3))


def test_config():
    cfg = parse_config("# scheme\nq=3\nL = 2\nT=2  # masks\nseed=5\npoints=1,2, 3\n")
    assert cfg == {"q": 3, "L": 2, "T": 2, "seed": 5, "points": [1, 2, 3]}
    with pytest.raises(FormatError, match="unknown key"):
        parse_config("z=1")
    with pytest.raises(FormatError, match="integer"):
        parse_config("q=two")
    with pytest.raises(FormatError, match="key=value"):
        parse_config("q 3")
