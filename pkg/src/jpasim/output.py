"""Deterministic CSV/JSON writers shared by the CLI.

Dialect: comma-separated, '.' decimal, floats at 17 significant digits
(lossless round-trip), booleans as 0/1, '#'-prefixed metadata lines before
the header row.  The full resolved run configuration is embedded as one
canonical-JSON metadata line, so identical configs produce byte-identical
files (no timestamps anywhere).
"""

from __future__ import annotations

import json
import math
from typing import Any, Sequence

from .errors import ValidationError

MAGIC = "jpasim-csv v1"


def _canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=True)


def format_value(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int,)):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.17g}"
    if isinstance(x, str):
        if any(c in x for c in ",\n\r\""):
            raise ValidationError("CSV cell strings may not contain separators",
                                  value=x)
        return x
    # numpy scalars land here; route through their python equivalents
    if hasattr(x, "item"):
        return format_value(x.item())
    raise ValidationError(f"unsupported CSV cell type {type(x).__name__}")


def write_csv(path: str, columns: Sequence[tuple], config: dict) -> None:
    """columns: ordered (name, values) pairs, all equal length."""
    names = [c[0] for c in columns]
    series = [list(c[1]) for c in columns]
    if len(set(len(s) for s in series)) > 1:
        raise ValidationError("CSV columns must have equal lengths",
                              lengths={n: len(s) for n, s in zip(names, series)})
    lines = [f"# {MAGIC}", f"# config = {_canonical_json(config)}"]
    lines.append(",".join(names))
    for row in zip(*series):
        lines.append(",".join(format_value(x) for x in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(path: str, obj: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n")


def read_csv(path: str):
    """Parse the dialect back into (config dict, {column: list[float]})."""
    config = None
    header = None
    data: dict[str, list] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("config = "):
                    config = json.loads(body[len("config = "):])
                continue
            if header is None:
                header = line.split(",")
                data = {h: [] for h in header}
                continue
            for h, cell in zip(header, line.split(",")):
                data[h].append(float(cell))
    if header is None:
        raise ValidationError("CSV file has no header row", path=path)
    return config, data
