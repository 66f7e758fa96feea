"""CSV serialization for samples, surfaces, and report tables.

Sample format: the first row holds the grid values; every following row is
one subject's curve.  Surface format: the first row holds the response
grid (with an empty corner cell), the first column the predictor grid, and
the body the surface values.  Numbers are written with 17 significant
digits, which round-trips IEEE doubles exactly.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, List, Sequence

import numpy as np

from .core import FuncregError, FunctionalSample, Grid, InvalidGridError, Surface

__all__ = [
    "FileFormatError",
    "format_float",
    "save_sample",
    "load_sample",
    "save_surface",
    "load_surface",
    "save_table",
    "load_table",
]


class FileFormatError(FuncregError):
    """A data file is malformed; the message carries the line number."""


def format_float(x: float) -> str:
    """17 significant digits: exact round-trip for IEEE doubles."""
    return format(float(x), ".17g")


def _write_rows(path, rows: Iterable[Sequence[str]]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for row in rows:
            writer.writerow(row)


def _parse_float(token: str, path, line_no: int, col_no: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise FileFormatError(
            f"{path}: line {line_no}, column {col_no}: {token!r} is not a number"
        ) from None


def save_sample(path, sample: FunctionalSample) -> None:
    """Write a sample as grid header plus one row per subject."""
    rows = [[format_float(v) for v in sample.grid.points]]
    rows.extend([format_float(v) for v in row] for row in sample.matrix)
    _write_rows(path, rows)


def load_sample(path, role: str = "data") -> FunctionalSample:
    """Read a sample file, validating the grid and row lengths.

    ``role`` (e.g. "predictor" or "response") only decorates error messages.
    """
    path = Path(path)
    if not path.exists():
        raise FileFormatError(f"{role} file {path} does not exist")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FileFormatError(f"{path}: empty {role} file") from None
        grid_vals = [_parse_float(tok, path, 1, j + 1) for j, tok in enumerate(header)]
        try:
            grid = Grid(grid_vals)
        except InvalidGridError as exc:
            raise FileFormatError(f"{path}: line 1: bad {role} grid: {exc}") from None
        rows: List[List[float]] = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(grid_vals):
                raise FileFormatError(
                    f"{path}: line {line_no}: expected {len(grid_vals)} values, "
                    f"got {len(row)}"
                )
            rows.append(
                [_parse_float(tok, path, line_no, j + 1) for j, tok in enumerate(row)]
            )
    if not rows:
        raise FileFormatError(f"{path}: {role} file has a grid header but no curves")
    return FunctionalSample(grid, np.array(rows))


def save_surface(path, surface: Surface) -> None:
    """Write a surface with grids on the margins and values in the body."""
    rows = [[""] + [format_float(v) for v in surface.grid_t.points]]
    for si, row in zip(surface.grid_s.points, surface.values):
        rows.append([format_float(si)] + [format_float(v) for v in row])
    _write_rows(path, rows)


def load_surface(path) -> Surface:
    path = Path(path)
    if not path.exists():
        raise FileFormatError(f"surface file {path} does not exist")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FileFormatError(f"{path}: empty surface file") from None
        if not header or header[0] != "":
            raise FileFormatError(
                f"{path}: line 1: surface header must start with an empty corner cell"
            )
        grid_t = [_parse_float(tok, path, 1, j + 2) for j, tok in enumerate(header[1:])]
        grid_s: List[float] = []
        body: List[List[float]] = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(grid_t) + 1:
                raise FileFormatError(
                    f"{path}: line {line_no}: expected {len(grid_t) + 1} values, "
                    f"got {len(row)}"
                )
            grid_s.append(_parse_float(row[0], path, line_no, 1))
            body.append(
                [_parse_float(tok, path, line_no, j + 2) for j, tok in enumerate(row[1:])]
            )
    try:
        return Surface(Grid(grid_s), Grid(grid_t), np.array(body))
    except (InvalidGridError, FuncregError) as exc:
        raise FileFormatError(f"{path}: bad surface: {exc}") from None


def save_table(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Write a generic report table; floats get the exact format."""
    out = [list(header)]
    for row in rows:
        out.append(
            [format_float(v) if isinstance(v, float) else str(v) for v in row]
        )
    _write_rows(path, out)


def load_table(path) -> List[List[str]]:
    """Read a report table back as raw string cells, header first."""
    with open(path, newline="", encoding="utf-8") as fh:
        return [row for row in csv.reader(fh) if row]
