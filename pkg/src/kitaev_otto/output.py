"""Table serialisation: CSV with a ``# config:`` preamble, or JSON."""

from __future__ import annotations

import csv
import io
import json
import sys

from .errors import OttoError
from .otto import Mode

__all__ = ["CYCLE_COLUMNS", "OutputError", "Table", "format_value", "render", "write"]

CYCLE_COLUMNS = (
    "alpha",
    "h_i",
    "h_f",
    "N",
    "T_c",
    "T_h",
    "Q_h",
    "Q_c",
    "W",
    "eta",
    "eta_R",
    "mode",
    "pi_per_spin",
    "piR_per_spin",
)


class OutputError(OttoError, OSError):
    exit_code = 3


class Table:
    """Ordered rows plus the resolved configuration and free-form notes."""

    def __init__(self, columns, config: dict, rows=(), notes=None):
        self.columns = tuple(columns)
        self.config = dict(config)
        self.rows = [dict(r) for r in rows]
        self.notes = dict(notes or {})


def format_value(value, digits: int) -> str:
    if value is None:
        return ""
    if isinstance(value, Mode):
        return value.value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, f".{digits}g")
    return str(value)


def _render_csv(table: Table, digits: int) -> str:
    buf = io.StringIO(newline="")
    for key, value in table.config.items():
        buf.write(f"# config: {key}={format_value(value, digits)}\n")
    for key, value in table.notes.items():
        buf.write(f"# {key}: {format_value(value, digits)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_value(row.get(c), digits) for c in table.columns])
    return buf.getvalue()


def _json_value(value, digits):
    if value is None or isinstance(value, (bool, int)):
        return value
    if isinstance(value, Mode):
        return value.value
    if isinstance(value, float):
        # Same rounding as the CSV so both formats carry identical numbers.
        return float(format(value, f".{digits}g"))
    return str(value)


def _render_json(table: Table, digits: int) -> str:
    doc = {
        "config": {k: _json_value(v, digits) for k, v in table.config.items()},
        "notes": {k: _json_value(v, digits) for k, v in table.notes.items()},
        "columns": list(table.columns),
        "records": [{c: _json_value(row.get(c), digits) for c in table.columns} for row in table.rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def render(table: Table, fmt: str = "csv", digits: int = 12) -> str:
    if fmt == "csv":
        return _render_csv(table, digits)
    if fmt == "json":
        return _render_json(table, digits)
    raise ValueError(f"unknown output format {fmt!r}")


def write(table: Table, path: str | None, fmt: str = "csv", digits: int = 12) -> None:
    """Write to ``path``, or to stdout when ``path`` is ``None`` or ``-``."""
    text = render(table, fmt, digits)
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
