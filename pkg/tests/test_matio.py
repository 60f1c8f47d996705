import numpy as np
import pytest

from philyap.matio import MatrixFormatError, format_matrix, parse_matrix, read_matrix, write_matrix


def test_roundtrip_is_exact(tmp_path, rng):
    M = rng.standard_normal((3, 4))
    write_matrix(tmp_path / "m.txt", M)
    assert np.array_equal(read_matrix(tmp_path / "m.txt"), M)


def test_comments_and_free_whitespace():
    M = parse_matrix("# header next\n2 2  # shape\n1 2\n\n  3\n4 # tail\n")
    assert np.array_equal(M, [[1, 2], [3, 4]])


@pytest.mark.parametrize("text, line", [
    ("2 2\n1 2\n3 x\n", 3),
    ("2\n1 2 3 4\n", 1),
    ("2 2\n1 2 3 4 5\n", 2),
    ("0 2\n", 1),
    ("2 2\n1 inf 3 4\n", 2),
])
def test_errors_name_the_line(text, line):
    with pytest.raises(MatrixFormatError) as info:
        parse_matrix(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_short_file():
    with pytest.raises(MatrixFormatError, match="expected 4 entries"):
        parse_matrix("2 2\n1 2 3\n")
    with pytest.raises(MatrixFormatError, match="empty"):
        parse_matrix("# nothing\n")


def test_format_header():
    assert format_matrix(np.eye(2)).splitlines()[0] == "2 2"
