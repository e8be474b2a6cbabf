"""Tabular output: CSV with ``#`` metadata lines, or a JSON array of row objects.

Floats are written with 17 significant digits, so parsing a file and writing
it back reproduces it byte for byte.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

UNITS_NOTE = "natural units (hbar = c = k_B = 1): a in L, T in 1/L, F in 1/L^3, P in 1/L^4, S in 1/L^2"


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)
    metadata: list = field(default_factory=list)  # (key, value) pairs, in order

    def add_meta(self, key, value):
        self.metadata.append((str(key), value))

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def format_value(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if v == 0.0:
            return "0"  # no "-0"
        if math.isnan(v):
            return "nan"
        return format(v, ".17g")
    return str(v)


def to_csv(table: Table) -> str:
    lines = [f"# {k}: {format_value(v)}" for k, v in table.metadata]
    lines.append(",".join(table.columns))
    for row in table.rows:
        if len(row) != len(table.columns):
            raise ValueError(f"row has {len(row)} fields, expected {len(table.columns)}")
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_value(v):
    if isinstance(v, float) and v == 0.0:
        return 0.0
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def to_json(table: Table) -> str:
    records = [{c: _json_value(v) for c, v in zip(table.columns, row)} for row in table.rows]
    return json.dumps(records, indent=1) + "\n"


def render(table: Table, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(table)
    if fmt == "json":
        return to_json(table)
    raise ValueError(f"unknown format {fmt!r}")


def _parse_cell(text):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_csv(text: str) -> Table:
    """Inverse of :func:`to_csv`."""
    meta, rows, columns = [], [], None
    for line in text.split("\n"):
        if not line:
            continue
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta.append((key, value))  # kept verbatim
        elif columns is None:
            columns = line.split(",")
        else:
            rows.append([_parse_cell(c) for c in line.split(",")])
    return Table(columns or [], rows, meta)
