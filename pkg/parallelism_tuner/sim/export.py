"""CSV export of simulation traces and per-core time breakdowns."""

import csv
import io
from pathlib import Path
from typing import Union

from ..models import SimResult
from ..utils import write_atomic

TRACE_HEADER = ("node_id", "pool_id", "socket_id", "start", "end")
CORE_HEADER = ("core_id", "busy", "sync", "idle")


def _csv(header: tuple[str, ...], rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def trace_csv(result: SimResult) -> str:
    return _csv(
        TRACE_HEADER,
        ((e.node_id, e.pool_id, e.socket_id, repr(e.start), repr(e.end)) for e in result.trace),
    )


def core_csv(result: SimResult) -> str:
    return _csv(
        CORE_HEADER,
        ((c.core_id, repr(c.busy), repr(c.sync), repr(c.idle)) for c in result.per_core),
    )


def write_trace_csv(result: SimResult, path: Union[str, Path]) -> Path:
    """Write the trace CSV atomically."""
    return write_atomic(path, trace_csv(result))


def write_core_csv(result: SimResult, path: Union[str, Path]) -> Path:
    """Write the per-core breakdown CSV atomically."""
    return write_atomic(path, core_csv(result))
