"""Tabular sweep results with a fixed column order and CSV output."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field


def fmt_number(v, digits: int = 17) -> str:
    """Format a float with ``digits`` significant digits; blanks for None."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return f"{v:.{digits}g}"
    return str(v)


@dataclass
class SweepTable:
    columns: list[str]
    rows: list[dict] = field(default_factory=list)

    def append(self, row: dict) -> None:
        unknown = set(row) - set(self.columns)
        if unknown:
            raise KeyError(f"unknown columns {sorted(unknown)}")
        self.rows.append(row)

    def column(self, name: str) -> list:
        return [r.get(name) for r in self.rows]

    def __len__(self) -> int:
        return len(self.rows)

    def to_csv(self, digits: int = 17) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([fmt_number(r.get(c), digits) for c in self.columns])
        return buf.getvalue()

    def write_csv(self, path, digits: int = 17) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv(digits))
