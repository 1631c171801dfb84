"""Tabular reports written as CSV or JSON.

CSV layout: a header row and data rows, followed by footer lines that start
with ``#`` (so ``pandas.read_csv(path, comment="#")`` reads just the table)::

    # footer
    # key,value
    # table <name>
    # col1,col2
    # v1,v2

JSON layout: ``{"meta": {...}, "columns": [...], "rows": [{...}], "footer": {...}}``
plus ``"tables"`` when auxiliary tables are present.  Floats use the shortest
round-trip representation in both formats; non-finite values are written as
the strings ``inf``, ``-inf`` and ``nan``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any


def _scalar(v: Any) -> Any:
    if isinstance(v, bool):
        return v
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):
        v = v.item()
    if isinstance(v, float):
        return v if math.isfinite(v) else repr(v)
    return v


def _text(v: Any) -> str:
    v = _scalar(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass
class Report:
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)
    footer: dict[str, Any] = field(default_factory=dict)
    tables: dict[str, tuple[list[str], list[tuple]]] = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_text(v) for v in row])
        if self.footer:
            buf.write("# footer\n")
            for k, v in self.footer.items():
                buf.write(f"# {k},{_text(v)}\n")
        for name, (cols, rows) in self.tables.items():
            buf.write(f"# table {name}\n")
            buf.write("# " + ",".join(cols) + "\n")
            for row in rows:
                buf.write("# " + ",".join(_text(v) for v in row) + "\n")
        return buf.getvalue()

    def to_json(self) -> str:
        doc: dict[str, Any] = {
            "meta": {k: _scalar(v) for k, v in self.meta.items()},
            "columns": list(self.columns),
            "rows": [{c: _scalar(v) for c, v in zip(self.columns, row)} for row in self.rows],
            "footer": {k: _scalar(v) for k, v in self.footer.items()},
        }
        if self.tables:
            doc["tables"] = {
                name: [{c: _scalar(v) for c, v in zip(cols, row)} for row in rows]
                for name, (cols, rows) in self.tables.items()
            }
        return json.dumps(doc, indent=1, allow_nan=False) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")
