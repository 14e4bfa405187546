"""
Report construction and rendering.

A report's results payload may carry a table under the ``rows`` key (a list
of flat dicts); text output renders it as aligned columns and CSV output
renders only the table.
"""

import csv
import io
import json
from collections.abc import Mapping, Sequence
from typing import Any, Optional

from . import __version__
from .models import Report
from .utils import sha256_text

TABLE_KEY = "rows"
FORMATS = ("text", "json", "csv")


def build_report(
    command: str,
    inputs: Mapping[str, str],
    results: dict[str, Any],
    measured: bool = False,
) -> Report:
    """
    Assemble a self-describing report.

    Args:
        command: Subcommand name
        inputs: Input name -> canonical serialized text (digested, not embedded)
        results: Command payload
        measured: Results are wall-clock measurements
    """
    return Report(
        command=command,
        inputs={name: sha256_text(text) for name, text in sorted(inputs.items())},
        results=results,
        tool_version=__version__,
        measured=measured,
    )


def render_json(report: Report) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def render_csv(rows: Sequence[Mapping[str, Any]], header: Optional[Sequence[str]] = None) -> str:
    """Rows as CSV, columns in `header` order (default: first row's keys)."""
    header = list(header or (rows[0].keys() if rows else []))
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=header, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    return str(value)


def _table(rows: Sequence[Mapping[str, Any]]) -> list[str]:
    if not rows:
        return ["(no rows)"]
    header = list(rows[0].keys())
    cells = [[_cell(row.get(column, "")) for column in header] for row in rows]
    widths = [max(len(column), *(len(line[i]) for line in cells)) for i, column in enumerate(header)]
    lines = ["  ".join(column.ljust(width) for column, width in zip(header, widths))]
    lines.append("  ".join("-" * width for width in widths))
    lines.extend("  ".join(cell.ljust(width) for cell, width in zip(line, widths)) for line in cells)
    return [line.rstrip() for line in lines]


def _flatten(prefix: str, value: Any, lines: list[str]) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else key, value[key], lines)
    else:
        lines.append(f"{prefix}: {_cell(value)}")


def render_text(report: Report) -> str:
    """Human-readable report: header, key/value results, then the table."""
    lines = [f"{report.command} (parallelism-tuner {report.tool_version})"]
    for name, digest in report.inputs.items():
        lines.append(f"input {name}: sha256 {digest[:16]}")
    if report.measured:
        lines.append("measured: true")
    lines.append("")
    scalars = {key: value for key, value in report.results.items() if key != TABLE_KEY}
    _flatten("", scalars, lines)
    if TABLE_KEY in report.results:
        lines.append("")
        lines.extend(_table(report.results[TABLE_KEY]))
    return "\n".join(lines) + "\n"


def render(report: Report, fmt: str, header: Optional[Sequence[str]] = None) -> str:
    """
    Render a report in one of FORMATS.

    Raises:
        ValueError: Unknown format
    """
    if fmt == "json":
        return render_json(report)
    if fmt == "csv":
        return render_csv(report.results.get(TABLE_KEY, []), header)
    if fmt == "text":
        return render_text(report)
    raise ValueError(f"Unknown format '{fmt}', expected one of {FORMATS}")
