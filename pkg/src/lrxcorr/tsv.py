"""Tab-separated tables with ``#`` comment headers."""
from __future__ import annotations

import io
import json
import sys
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = ["format_value", "write_table", "read_table"]


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_table(
    dest,
    columns: Sequence[str],
    rows: Iterable[Sequence],
    meta: Mapping[str, object] | None = None,
    notes: Sequence[str] = (),
) -> None:
    """Write ``rows`` under a ``#``-commented header.

    ``meta`` is echoed as ``# key: <json>`` lines so a run can be reproduced
    from its output; ``notes`` are free-form comment lines placed after it.
    ``dest`` is a path, an open text stream, or ``None``/``"-"`` for stdout.
    """
    buf = io.StringIO()
    for key, value in (meta or {}).items():
        buf.write(f"# {key}: {json.dumps(value, sort_keys=True, default=_jsonable)}\n")
    for line in notes:
        buf.write(f"# {line}\n")
    buf.write("\t".join(columns) + "\n")
    for row in rows:
        buf.write("\t".join(format_value(v) for v in row) + "\n")
    text = buf.getvalue()

    if dest is None or dest == "-":
        sys.stdout.write(text)
    elif hasattr(dest, "write"):
        dest.write(text)
    else:
        Path(dest).write_text(text)


def read_table(path) -> tuple[dict[str, object], list[str], np.ndarray]:
    """Inverse of :func:`write_table` for numeric tables."""
    meta: dict[str, object] = {}
    header: list[str] | None = None
    rows: list[list[float]] = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, sep, val = line[1:].strip().partition(": ")
            if sep:
                try:
                    meta[key] = json.loads(val)
                except json.JSONDecodeError:
                    pass
            continue
        if header is None:
            header = line.split("\t")
            continue
        rows.append([float(c) for c in line.split("\t")])
    if header is None:
        raise ValueError(f"{path}: no header row")
    data = np.array(rows, dtype=float).reshape(-1, len(header))
    return meta, header, data


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if hasattr(obj, "__dict__"):
        return vars(obj)
    return str(obj)
