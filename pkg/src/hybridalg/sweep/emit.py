"""CSV / JSON output of sweep records."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Sequence

from .run import SweepRecord

__all__ = ["emit", "render", "read_records"]


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} in sweep record")
    return f"{x:.17g}"


def render(records: Sequence[SweepRecord], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(SweepRecord.COLUMNS)
        for rec in records:
            writer.writerow([_fmt(x) for x in rec.row()])
        return buf.getvalue()
    if fmt == "json":
        for rec in records:
            for x in rec.row():
                _fmt(x)
        return json.dumps([rec.as_dict() for rec in records], indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def emit(records: Sequence[SweepRecord], fmt: str, path: str | Path | None) -> str:
    """Write records to ``path`` (or just return the text when ``path`` is None)."""
    text = render(records, fmt)
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write sweep output to {path}: {exc.strerror}") from exc
    return text


def read_records(text: str, fmt: str) -> list[SweepRecord]:
    if fmt == "csv":
        return [SweepRecord.from_dict(row) for row in csv.DictReader(io.StringIO(text))]
    if fmt == "json":
        return [SweepRecord.from_dict(d) for d in json.loads(text)]
    raise ValueError(f"unknown format {fmt!r}")
