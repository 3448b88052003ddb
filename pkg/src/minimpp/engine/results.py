"""Deterministic tabular query output.

Decimal cells are exact scaled integers; rendering fixes the fraction digits
(kind ``dec:N``).  Dates render ISO.  Equality is plain structural equality,
which is meaningful because every query ends in a canonical total order.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from ..datagen import days_to_iso


def render_scaled(value: int, scale: int) -> str:
    if scale == 0:
        return str(value)
    sign = "-" if value < 0 else ""
    q, r = divmod(abs(int(value)), 10**scale)
    return f"{sign}{q}.{r:0{scale}d}"


def render_cell(value, kind: str) -> str:
    if kind == "int":
        return str(value)
    if kind == "str":
        return value
    if kind == "date":
        return days_to_iso(value)
    if kind.startswith("dec:"):
        return render_scaled(value, int(kind.split(":")[1]))
    raise ValueError(f"unknown render kind {kind!r}")


@dataclass
class ResultSet:
    columns: tuple[tuple[str, str], ...]  # (name, render kind)
    rows: list[tuple]

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def rendered_rows(self) -> list[list[str]]:
        kinds = [k for _, k in self.columns]
        return [[render_cell(v, k) for v, k in zip(row, kinds)] for row in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([name for name, _ in self.columns])
        for row in self.rendered_rows():
            w.writerow(row)
        return buf.getvalue()

    def write_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ResultSet):
            return NotImplemented
        return self.columns == other.columns and self.rows == other.rows
