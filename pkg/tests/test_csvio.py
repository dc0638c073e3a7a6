import numpy as np
import pytest

from matpoafd.csvio import read_matrix, read_vector, write_matrix
from matpoafd.exceptions import InputError


def write(tmp_path, text, name="m.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_round_trip_is_exact(tmp_path, rng):
    a = rng.standard_normal((4, 3)) * 10.0 ** rng.integers(-200, 200, (4, 3))
    p = tmp_path / "a.csv"
    write_matrix(p, a)
    np.testing.assert_array_equal(read_matrix(p), a)


def test_vector(tmp_path):
    p = write(tmp_path, "1\n2\n3\n\n")
    np.testing.assert_array_equal(read_vector(p), [1, 2, 3])


def test_vector_rejects_matrix(tmp_path):
    with pytest.raises(InputError, match="single column"):
        read_vector(write(tmp_path, "1,2\n"))


@pytest.mark.parametrize("text,where", [
    ("1,2\n3\n", "row 2"),
    ("1,2\n3,abc\n", "row 2, column 2"),
    ("1,nan\n", "row 1, column 2"),
    ("1,inf\n", "row 1, column 2"),
    ("1\n\n2\n", "row 2"),
    ("", "no data"),
])
def test_malformed(tmp_path, text, where):
    p = write(tmp_path, text)
    with pytest.raises(InputError) as info:
        read_matrix(p)
    msg = str(info.value)
    assert str(p) in msg and where in msg and "\n" not in msg


def test_missing(tmp_path):
    with pytest.raises(InputError, match="not found"):
        read_matrix(tmp_path / "nope.csv")


def test_write_is_deterministic(tmp_path):
    a = np.array([[0.1, 1 / 3], [2.0, -0.0]])
    p1, p2 = tmp_path / "1.csv", tmp_path / "2.csv"
    write_matrix(p1, a)
    write_matrix(p2, a)
    assert p1.read_bytes() == p2.read_bytes()
    assert p1.read_text().splitlines()[0] == "0.10000000000000001,0.33333333333333331"
