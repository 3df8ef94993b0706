"""Text serialization helpers: fixed-precision JSON/CSV and atomic writes.

Floats are written with 17 significant digits in JSON (round-trip exact for
float64) and 12 significant digits in CSV.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

JSON_FLOAT_DIGITS = 17
CSV_FLOAT_DIGITS = 12


def format_float(value: float, digits: int) -> str:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"cannot serialize non-finite float {value!r}")
    return f"{value:.{digits}g}"


def _scalar(value: Any) -> Any:
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


def dumps(obj: Any, indent: int | None = 2) -> str:
    """Serialize ``obj`` to JSON, printing every float with 17 significant digits.

    Supports dicts (string keys), lists/tuples, numpy arrays and scalars,
    str, int, float, bool and None.
    """
    pad = "" if indent is None else " " * indent
    newline = "" if indent is None else "\n"
    sep = ", " if indent is None else ","

    def enc(value: Any, level: int) -> str:
        value = _scalar(value)
        if isinstance(value, np.ndarray):
            value = value.tolist()
        if value is None or isinstance(value, (bool, str)):
            return json.dumps(value)
        if isinstance(value, int):
            return str(value)
        if isinstance(value, float):
            text = format_float(value, JSON_FLOAT_DIGITS)
            # keep floats recognisable as floats, e.g. 1 -> 1.0
            return text if any(c in text for c in ".en") else text + ".0"
        inner = pad * (level + 1)
        outer = pad * level
        if isinstance(value, dict):
            if not value:
                return "{}"
            items = [
                f"{inner}{json.dumps(str(k))}: {enc(v, level + 1)}" for k, v in value.items()
            ]
            return "{" + newline + (sep + newline).join(items) + newline + outer + "}"
        if isinstance(value, (list, tuple)):
            if not value:
                return "[]"
            # scalar lists stay on one line
            if all(not isinstance(_scalar(v), (dict, list, tuple, np.ndarray)) for v in value):
                return "[" + ", ".join(enc(v, level + 1) for v in value) + "]"
            items = [inner + enc(v, level + 1) for v in value]
            return "[" + newline + (sep + newline).join(items) + newline + outer + "]"
        raise TypeError(f"cannot serialize object of type {type(value).__name__}")

    return enc(obj, 0) + ("\n" if indent is not None else "")


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Render rows as CSV; floats use 12 significant digits."""

    def cell(value: Any) -> str:
        value = _scalar(value)
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            if not math.isfinite(value):
                return str(value)
            return format_float(value, CSV_FLOAT_DIGITS)
        return str(value)

    lines = [",".join(header)]
    lines.extend(",".join(cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def atomic_write_text(path: str | os.PathLike, text: str) -> Path:
    """Write ``text`` to ``path`` via a temporary file and rename.

    Readers never observe a partially written file.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path
