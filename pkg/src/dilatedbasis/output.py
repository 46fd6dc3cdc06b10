"""Tabular and structured output: CSV, gnuplot data blocks and JSON envelopes."""

from __future__ import annotations

import csv
import json
import math
from numbers import Integral, Real
from pathlib import Path

import numpy as np

from .errors import InputError


def fmt(x) -> str:
    """Shortest text that round-trips: integers as-is, floats with 17 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, Integral):
        return str(int(x))
    if isinstance(x, Real):
        return format(float(x), ".17g")
    return str(x)


def _flatten(rec: dict) -> dict:
    out = {}
    for k, v in rec.items():
        if isinstance(v, (complex, np.complexfloating)):
            out[f"{k}_re"] = v.real
            out[f"{k}_im"] = v.imag
        elif isinstance(v, (list, tuple, np.ndarray)):
            out[k] = " ".join(fmt(x) for x in np.asarray(v).ravel().tolist())
        else:
            out[k] = v
    return out


def emit_csv(records, path) -> Path:
    """Write homogeneous records (dicts) as UTF-8 CSV with LF line endings."""
    rows = [_flatten(r) for r in records]
    if not rows:
        raise InputError("no records to write")
    cols = list(rows[0])
    for r in rows[1:]:
        if list(r) != cols:
            raise InputError(f"records are not homogeneous: {list(r)} vs {cols}")
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(cols)
            for r in rows:
                w.writerow([fmt(r[c]) for c in cols])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def _parse(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    if text in ("true", "false"):
        return text == "true"
    return text


def read_csv(path) -> list[dict]:
    """Inverse of :func:`emit_csv` for scalar columns."""
    with Path(path).open(encoding="utf-8", newline="") as fh:
        return [{k: _parse(v) for k, v in row.items()} for row in csv.DictReader(fh)]


def emit_plotdata(series: dict, path, xlabel="x", ylabel="y") -> Path:
    """Write ``{name: (x, y)}`` as gnuplot index blocks separated by two blank lines."""
    path = Path(path)
    lines = []
    for name, (x, y) in series.items():
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        if x.shape != y.shape:
            raise InputError(f"series {name!r}: x and y lengths differ")
        lines.append(f"# {name}")
        lines.append(f"# {xlabel} {ylabel}")
        lines.extend(f"{fmt(a)} {fmt(b)}" for a, b in zip(x, y))
        lines.extend(["", ""])
    try:
        path.write_text("\n".join(lines), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def jsonable(obj):
    """Convert numpy scalars/arrays, complex numbers and tuples for ``json``."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, Integral):
        return int(obj)
    if isinstance(obj, Real):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def dump_json(obj, path=None) -> str:
    text = json.dumps(jsonable(obj), indent=2, sort_keys=False) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    return text
