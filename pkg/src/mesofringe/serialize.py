"""CSV/JSON table writers shared by the data types and the CLI.

Numbers are written in scientific notation with 17 significant digits so
that round-tripping through text is lossless for float64.  Files are
written atomically (temp file + rename) and always with LF line endings.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from typing import Mapping, Sequence


def format_float(value: float) -> str:
    """Fixed scientific notation, 17 significant digits."""
    if isinstance(value, bool) or isinstance(value, int):
        return str(int(value))
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.16e}"


def render_csv(header: Sequence[str], columns: Sequence[Sequence[float]]) -> str:
    if len(header) != len(columns):
        raise ValueError("header/column count mismatch")
    n_rows = len(columns[0])
    if any(len(col) != n_rows for col in columns):
        raise ValueError("columns must have equal length")
    lines = [",".join(header)]
    for i in range(n_rows):
        lines.append(",".join(format_float(col[i]) for col in columns))
    return "\n".join(lines) + "\n"


def render_json(meta: Mapping, header: Sequence[str], columns: Sequence[Sequence[float]]) -> str:
    data = {name: [float(v) for v in col] for name, col in zip(header, columns)}
    return json.dumps({"meta": meta, "data": data}, sort_keys=True, indent=2) + "\n"


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".mesofringe-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_table(
    path: str,
    fmt: str,
    header: Sequence[str],
    columns: Sequence[Sequence[float]],
    meta: Mapping,
) -> None:
    if fmt == "csv":
        atomic_write_text(path, render_csv(header, columns))
    elif fmt == "json":
        atomic_write_text(path, render_json(meta, header, columns))
    else:
        raise ValueError(f"unknown output format {fmt!r}")
