"""Result formatting for the command line.

Formats:
  csv:    header row, then one line per row; floats to 12 significant digits
  json:   {"meta": {..., "schema": "wedgecasimir/1"}, "rows": [{...}, ...]}
  table:  fixed-width columns for reading at a terminal, 4 significant digits

All formatters are pure: the same table always renders to the same text.
"""

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

log = logging.getLogger(__name__)

SCHEMA = "wedgecasimir/1"

CSV_DIGITS = 12
TABLE_DIGITS = 4


@dataclass
class ResultTable:
    columns: Sequence[str]
    rows: List[Sequence[Any]] = field(default_factory=list)
    meta: Dict[str, Any] = field(default_factory=dict)

    def add(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(tuple(values))

    def records(self) -> List[Dict[str, Any]]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def fmt_value(value: Any, digits: int = CSV_DIGITS) -> str:
    """Text form of one cell."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


def _round(value: Any, digits: int = CSV_DIGITS) -> Any:
    if isinstance(value, float) and not isinstance(value, bool):
        return float(f"{value:.{digits}g}")
    if isinstance(value, dict):
        return {k: _round(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round(v, digits) for v in value]
    return value


def fmt_csv(table: ResultTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([fmt_value(v) for v in row])
    return buf.getvalue()


def fmt_json(table: ResultTable) -> str:
    doc = {
        "meta": _round({**table.meta, "schema": SCHEMA}),
        "rows": [_round(rec) for rec in table.records()],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def fmt_table(table: ResultTable) -> str:
    cells = [[fmt_value(v, TABLE_DIGITS) for v in row] for row in table.rows]
    widths = [len(c) for c in table.columns]
    for row in cells:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(table.columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


FORMATTERS = {
    "csv": fmt_csv,
    "json": fmt_json,
    "table": fmt_table,
}


def render(table: ResultTable, fmt: str) -> str:
    try:
        formatter = FORMATTERS[fmt]
    except KeyError:
        raise ValueError(f"unknown output format {fmt!r}") from None
    return formatter(table)
