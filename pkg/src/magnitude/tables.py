"""Tab-separated numeric tables: '#'-prefixed header, LF endings, UTF-8.

Cells are serialized with repr (shortest round-trip form), so
read_table(write_table(x)) reproduces every value bit for bit, nan
included.  Files are written atomically (temp file + rename).
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .errors import TableFormatError


@dataclass(frozen=True, eq=False)
class Table:
    columns: tuple
    rows: np.ndarray

    def __post_init__(self):
        cols = tuple(str(c) for c in self.columns)
        if not cols:
            raise ValueError("a table needs at least one column")
        if len(set(cols)) != len(cols):
            raise ValueError(f"duplicate column names in {cols}")
        for c in cols:
            if not c or any(ch in c for ch in "\t\n\r"):
                raise ValueError(f"bad column name {c!r}")
        rows = np.asarray(self.rows, dtype=np.float64)
        if rows.size == 0:
            rows = rows.reshape(0, len(cols))
        if rows.ndim != 2 or rows.shape[1] != len(cols):
            raise ValueError(
                f"rows must be (n, {len(cols)}) for columns {cols}, "
                f"got shape {rows.shape}"
            )
        rows.setflags(write=False)
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "rows", rows)

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    def column(self, name: str) -> np.ndarray:
        try:
            return self.rows[:, self.columns.index(name)]
        except ValueError:
            raise KeyError(f"no column {name!r} in {self.columns}") from None


def format_value(x: float) -> str:
    """Shortest decimal form that round-trips to the same float64."""
    return repr(float(x))


def render_table(table: Table) -> str:
    lines = ["#" + "\t".join(table.columns)]
    for row in table.rows:
        lines.append("\t".join(format_value(x) for x in row))
    return "\n".join(lines) + "\n"


def atomic_write_text(text: str, path) -> None:
    """Write UTF-8 text with LF endings via a temp file + rename, so
    readers never observe a half-written file."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as stream:
            stream.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise


def write_table(table: Table, destination) -> None:
    """Write to a path (atomically) or to an open text stream."""
    text = render_table(table)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        atomic_write_text(text, destination)


def parse_table(text: str) -> Table:
    lines = [ln[:-1] if ln.endswith("\r") else ln for ln in text.split("\n")]
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise TableFormatError("empty stream; expected a '#' header line")
    header = lines[0]
    if not header.startswith("#"):
        raise TableFormatError(
            f"first line must start with '#', got {header[:40]!r}"
        )
    columns = tuple(header[1:].split("\t"))
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != len(columns):
            raise TableFormatError(
                f"line {lineno}: {len(fields)} fields, expected {len(columns)}"
            )
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            raise TableFormatError(f"line {lineno}: non-numeric cell in {line!r}") from None
    return Table(columns=columns, rows=np.array(rows) if rows else np.empty((0, len(columns))))


def read_table(source) -> Table:
    """Read from a path or an open text stream."""
    if hasattr(source, "read"):
        return parse_table(source.read())
    with open(source, "r", encoding="utf-8", newline="") as stream:
        return parse_table(stream.read())
