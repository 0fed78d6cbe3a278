import io

import numpy as np
import pytest

from spnkit.core import DataError
from spnkit.io import read_csv, write_csv


def test_missing_cells_become_nan():
    matrix = read_csv(io.StringIO("1,0,\n0, nan ,1\n\n1,NaN,0.5\n"))
    assert matrix.shape == (3, 3)
    assert np.isnan(matrix[0, 2]) and np.isnan(matrix[1, 1]) and np.isnan(matrix[2, 1])
    assert matrix[2, 2] == 0.5


def test_header_is_skipped(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("a,b\n1.5,-2e3\n", encoding="utf-8")
    np.testing.assert_array_equal(read_csv(str(path), has_header=True), [[1.5, -2000.0]])


def test_single_column_of_missing_values():
    matrix = read_csv(io.StringIO("nan\n1\n"))
    assert matrix.shape == (2, 1)
    assert np.isnan(matrix[0, 0])


def test_blank_lines_in_a_single_column_are_missing_rows():
    matrix = read_csv(io.StringIO("1\n\n2\n"))
    assert matrix.shape == (3, 1)
    assert np.isnan(matrix[1, 0]) and matrix[2, 0] == 2.0

    stream = io.StringIO()
    original = np.array([[1.0], [np.nan], [np.nan], [2.0], [np.nan]])
    write_csv(original, stream)
    stream.seek(0)
    np.testing.assert_array_equal(read_csv(stream), original)


def test_ragged_row_is_reported():
    with pytest.raises(DataError) as excinfo:
        read_csv(io.StringIO("1,2\n3\n"))
    assert excinfo.value.row == 1


def test_non_numeric_cell_is_reported():
    with pytest.raises(DataError) as excinfo:
        read_csv(io.StringIO("1,2\n3,x\n"))
    assert (excinfo.value.row, excinfo.value.column) == (1, 1)


def test_missing_file_and_empty_input(tmp_path):
    with pytest.raises(DataError, match="not found"):
        read_csv(str(tmp_path / "missing.csv"))
    with pytest.raises(DataError, match="no data rows"):
        read_csv(io.StringIO("\n\n"))


def test_write_csv_precision_and_missing():
    stream = io.StringIO()
    write_csv(np.array([[1.0, np.nan], [0.123456789, 2.0]]), stream, precision=3, header=["a", "b"])
    assert stream.getvalue() == "a,b\n1.000,\n0.123,2.000\n"
