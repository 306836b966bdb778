"""Report containers and delimited serialization.

Reports render identically for identical inputs: no timestamps, fixed
column order, floats printed with 6 significant digits in both the CSV
and the JSON mirror.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any


def fmt_value(v: Any) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _round6(v: Any) -> Any:
    if isinstance(v, bool):
        return v
    if isinstance(v, float):
        return float(f"{v:.6g}")
    return v


@dataclass
class Report:
    """Tabular result set: ordered columns, row dicts, and metadata."""

    columns: list[str]
    rows: list[dict[str, Any]] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    def add_row(self, **values: Any) -> None:
        missing = [c for c in self.columns if c not in values]
        if missing:
            raise ValueError(f"row missing columns: {missing}")
        self.rows.append({c: values[c] for c in self.columns})

    def to_csv(self) -> str:
        out = io.StringIO()
        for key in sorted(self.meta):
            value = self.meta[key]
            if isinstance(value, (dict, list)):
                continue  # structured metadata lives in the JSON mirror
            out.write(f"# {key}: {fmt_value(value)}\n")
        out.write(",".join(self.columns) + "\n")
        for row in self.rows:
            out.write(",".join(fmt_value(row[c]) for c in self.columns) + "\n")
        return out.getvalue()

    def to_json(self) -> str:
        payload = {
            "meta": _round_tree(self.meta),
            "columns": self.columns,
            "rows": [{c: _round6(r[c]) for c in self.columns} for r in self.rows],
        }
        return json.dumps(payload, indent=2, sort_keys=False) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown report format {fmt!r}")

    def write(self, path: str | Path, fmt: str) -> None:
        Path(path).write_text(self.render(fmt))


def _round_tree(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _round_tree(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_tree(v) for v in value]
    return _round6(value)
