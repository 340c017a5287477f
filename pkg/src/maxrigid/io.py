"""Deterministic file output: long-format CSV tables with JSON sidecars."""

import csv
import json
from pathlib import Path

import numpy as np

__all__ = ["to_jsonable", "write_json", "read_json", "write_table", "read_table"]


def to_jsonable(obj):
    """Convert numpy scalars, arrays and tuples to plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if np.isnan(x):
            return "nan"
        if np.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    return obj


def write_json(path, obj):
    """Write ``obj`` with sorted keys so identical inputs give identical bytes."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n")
    return path


def read_json(path):
    return json.loads(Path(path).read_text())


def _cell(x):
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if x is None:
        return ""
    return str(x)


def write_table(path, columns, rows, units=None, description=""):
    """Write a CSV table and a ``<name>.json`` sidecar naming columns and units.

    Parameters
    ----------
    path : path-like
        Target ``.csv`` file.
    columns : sequence of str
    rows : iterable of sequences
    units : dict, optional
        Column name to unit string; missing columns get ``""``.
    description : str

    Returns
    -------
    (Path, Path)
        The CSV and sidecar paths.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = [list(r) for r in rows]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            if len(r) != len(columns):
                raise ValueError(f"row has {len(r)} fields, expected {len(columns)}")
            w.writerow([_cell(x) for x in r])
    units = units or {}
    sidecar = write_json(path.with_suffix(".json"), {
        "file": path.name,
        "description": description,
        "columns": [{"name": c, "unit": units.get(c, "")} for c in columns],
        "n_rows": len(rows),
    })
    return path, sidecar


def read_table(path):
    """Read a CSV written by :func:`write_table` into a dict of float columns where possible."""
    with Path(path).open() as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = [row for row in reader]
    out = {}
    for j, name in enumerate(header):
        col = [row[j] for row in data]
        try:
            out[name] = np.array([float(x) if x != "" else np.nan for x in col])
        except ValueError:
            out[name] = col
    return out
