"""Tabular output in CSV or JSON, written atomically."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import tempfile

__all__ = ["Table", "format_cell", "render", "write_table", "write_text"]


class Table:
    def __init__(self, columns, rows=None):
        self.columns = list(columns)
        self.rows = []
        for row in rows or ():
            self.append(row)

    def append(self, row):
        row = list(row)
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} cells, expected {len(self.columns)}")
        self.rows.append(row)

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _json_cell(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render(table: Table, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([format_cell(v) for v in row])
        return buf.getvalue()
    if fmt == "json":
        data = {name: [_json_cell(row[i]) for row in table.rows] for i, name in enumerate(table.columns)}
        return json.dumps(data, indent=1) + "\n"
    raise ValueError(f"unknown output format {fmt!r}")


def write_table(table: Table, path=None, fmt: str = "csv") -> None:
    """Write to ``path`` via a temporary file so failures leave nothing behind."""
    text = render(table, fmt)
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    write_text(path, text)


def write_text(path, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
