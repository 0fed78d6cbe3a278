"""
CSV data ingestion and output.

Cells are numeric; an empty cell or "nan" (any case) is missing and becomes NaN.
"""
import io
import logging
from typing import List, Optional, TextIO, Union

import numpy as np
import pandas as pd

from ..core.errors import DataError

logger = logging.getLogger(__name__)

Source = Union[str, TextIO]


def _read_text(source: Source) -> str:
    if not isinstance(source, str):
        return source.read()
    try:
        with open(source, "r", encoding="utf-8") as f:
            return f.read()
    except FileNotFoundError:
        raise DataError(f"Data file not found: {source}")
    except OSError as e:
        raise DataError(f"Cannot read data file {source}: {e}") from e


def read_csv(source: Source, has_header: bool = False) -> np.ndarray:
    """
    Read a rectangular numeric CSV table. Blank lines are skipped, except in a
    single-column table, where a blank line is a row with a missing cell.

    Args:
        source: File path or open text stream
        has_header: Skip the first non-blank line

    Returns:
        Rows x columns float matrix with NaN for missing cells

    Raises:
        DataError: On a missing file, ragged rows or a non-numeric cell (row and column reported)
    """
    text = _read_text(source).replace("\r\n", "\n")
    if text.endswith("\n"):
        text = text[:-1]
    lines = text.split("\n") if text else []
    if has_header:
        first = next((i for i, line in enumerate(lines) if line.strip()), len(lines))
        lines = lines[first + 1:]
    content = [line for line in lines if line.strip()]
    if not content:
        raise DataError("CSV input has no data rows")

    width = content[0].count(",") + 1
    if width == 1:
        # a blank line is a row whose only cell is missing
        lines = [line if line.strip() else "nan" for line in lines]
    else:
        lines = content
    for row, line in enumerate(lines):
        fields = line.count(",") + 1
        if fields != width:
            raise DataError(f"ragged row: {fields} field(s), expected {width}", row)

    frame = pd.read_csv(io.StringIO("\n".join(lines)), header=None, dtype=str,
                        keep_default_na=False, skip_blank_lines=False)
    cells = frame.apply(lambda column: column.str.strip())
    missing = (cells == "") | (cells.apply(lambda column: column.str.lower()) == "nan")
    values = cells.mask(missing).apply(pd.to_numeric, errors="coerce")
    bad = values.isna() & ~missing
    if bad.to_numpy().any():
        row, column = np.argwhere(bad.to_numpy())[0]
        raise DataError(f"non-numeric cell {cells.iat[row, column]!r}", int(row), int(column))

    matrix = values.to_numpy(dtype=float)
    logger.info("Read %d row(s) x %d column(s), %d missing cell(s)", matrix.shape[0], matrix.shape[1],
                int(missing.to_numpy().sum()))
    return matrix


def format_cell(value: float, precision: int) -> str:
    if np.isnan(value):
        return ""
    return f"{value:.{precision}f}"


def write_csv(matrix, stream: TextIO, precision: int = 6, header: Optional[List[str]] = None):
    """Write a matrix as CSV; missing cells are written empty."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if header:
        stream.write(",".join(header) + "\n")
    for row in matrix:
        stream.write(",".join(format_cell(v, precision) for v in row) + "\n")
