"""CSV ingestion and emission for numeric datasets.

Comma separator, '.' decimal, UTF-8, optional header (auto-detected by
trying to parse the first row as numbers).  Rows containing missing or
non-finite values are dropped and counted rather than propagated.
Values are written with 17 significant digits so a write/read cycle is
lossless for doubles.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from os import PathLike

import numpy as np

__all__ = ["Dataset", "read_csv", "write_csv", "from_array"]


@dataclass(frozen=True, eq=False)
class Dataset:
    """A labeled numeric matrix plus the count of rows dropped on load."""

    columns: tuple[str, ...]
    values: np.ndarray
    n_dropped: int = 0

    def __post_init__(self) -> None:
        vals = np.atleast_2d(np.asarray(self.values, dtype=float))
        if vals.ndim != 2 or vals.shape[0] < 1 or vals.shape[1] < 1:
            raise ValueError("values must be a nonempty (n, p) matrix")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        cols = tuple(str(c) for c in self.columns)
        if len(cols) != vals.shape[1]:
            raise ValueError("column labels do not match the value width")
        if self.n_dropped < 0:
            raise ValueError("n_dropped must be nonnegative")
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "values", vals)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def _default_labels(p: int) -> tuple[str, ...]:
    return tuple(f"y{j + 1}" for j in range(p))


def from_array(values, columns=None) -> Dataset:
    """Wrap an array, inventing y1..yp labels when none are given."""
    vals = np.atleast_2d(np.asarray(values, dtype=float))
    if vals.shape[0] == 1 and np.asarray(values).ndim == 1:
        vals = vals.T
    cols = _default_labels(vals.shape[1]) if columns is None else columns
    return Dataset(tuple(cols), vals)


def _parse_cell(cell: str) -> float:
    text = cell.strip()
    if not text:
        return np.nan
    try:
        return float(text)
    except ValueError:
        return np.nan


def read_csv(path) -> Dataset:
    """Load a numeric CSV, dropping (and counting) incomplete rows.

    The first row is taken as a header exactly when at least one of its
    cells does not parse as a number; otherwise columns are labeled
    y1..yp.  A row of the wrong width is a format error, not a missing
    value.
    """
    with open(path, "r", encoding="utf-8", newline="") as handle:
        rows = [row for row in csv.reader(handle) if row]
    if not rows:
        raise ValueError(f"{path}: empty CSV")

    first = [_parse_cell(c) for c in rows[0]]
    has_header = any(np.isnan(v) and c.strip() for v, c in
                     zip(first, rows[0]))
    if has_header:
        columns = tuple(c.strip() for c in rows[0])
        body = rows[1:]
    else:
        columns = _default_labels(len(rows[0]))
        body = rows
    if not body:
        raise ValueError(f"{path}: no data rows")

    width = len(columns)
    parsed = np.empty((len(body), width))
    for i, row in enumerate(body):
        if len(row) != width:
            raise ValueError(
                f"{path}: row {i + 1} has {len(row)} cells, expected {width}")
        parsed[i] = [_parse_cell(c) for c in row]

    keep = np.all(np.isfinite(parsed), axis=1)
    dropped = int(np.sum(~keep))
    if not np.any(keep):
        raise ValueError(f"{path}: every row has missing values")
    return Dataset(columns, parsed[keep], dropped)


def write_csv(target, data: Dataset) -> None:
    """Write a dataset with a header row and 17-significant-digit cells.

    ``target`` is a path or a text file object (e.g. sys.stdout).
    """
    if isinstance(target, (str, PathLike)):
        with open(target, "w", encoding="utf-8", newline="") as handle:
            _write_rows(handle, data)
    else:
        _write_rows(target, data)


def _write_rows(handle: io.TextIOBase, data: Dataset) -> None:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(data.columns)
    for row in data.values:
        writer.writerow([f"{v:.17g}" for v in row])
