"""Newline-delimited result records.

One JSON object per line, schema version 1.  Floats are serialized with
Python's shortest round-trip representation, so parsing a record back yields
bit-identical values.  `wall_time_s` is the only field excluded from the
reproducibility contract.

Common fields: schema_version, kind, seed, config_digest, status, error,
wall_time_s.  Kind-specific fields are documented in the README field
dictionary.
"""

from __future__ import annotations

import json
import math
from typing import Iterable

from ..errors import UnknownField

SCHEMA_VERSION = 1
VOLATILE_FIELDS = ("wall_time_s",)


def _jsonable(value):
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        try:
            value = value.item()
        except (AttributeError, ValueError):
            pass
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)  # "inf" / "-inf" / "nan" kept as strings
    return value


def finalize_record(record: dict) -> dict:
    out = {"schema_version": SCHEMA_VERSION}
    for key, value in record.items():
        out[key] = _jsonable(value)
    return out


def dumps(record: dict) -> str:
    return json.dumps(finalize_record(record), sort_keys=True)


def write_records(path: str, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(dumps(rec) + "\n")


def read_records(path: str) -> list[dict]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out


def strip_volatile(record: dict) -> dict:
    return {k: v for k, v in record.items() if k not in VOLATILE_FIELDS}


def emit_plotdata(records: list[dict], selector: list[str]) -> str:
    """Tab-separated table of the selected fields, one header row.

    Scalar selectors yield one row per record.  When a selected field holds a
    list, the output switches to long format: scalar columns are repeated and
    each list element becomes a row with its index in column `k`.
    """
    if not selector:
        raise UnknownField("empty field selector")
    for name in selector:
        for rec in records:
            if name not in rec:
                raise UnknownField(f"field {name!r} missing from a record")
    series = [name for name in selector
              if records and isinstance(records[0].get(name), list)]
    if len(series) > 1:
        raise UnknownField("at most one series field per table")
    lines = []
    if not series:
        lines.append("\t".join(selector))
        for rec in records:
            lines.append("\t".join(_format(rec[name]) for name in selector))
    else:
        sname = series[0]
        scalars = [name for name in selector if name != sname]
        lines.append("\t".join(scalars + ["k", sname]))
        for rec in records:
            for k, val in enumerate(rec[sname]):
                row = [_format(rec[name]) for name in scalars]
                row += [str(k), _format(val)]
                lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def _format(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return json.dumps(value)
    return str(value)
