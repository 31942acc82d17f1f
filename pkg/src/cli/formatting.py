"""
Report rendering: json, csv and text
Payloads are JSON-ready (big integers already decimal strings)
"""
import csv
import io
import json
from typing import Any, Dict, List, Tuple

FORMATS = ("json", "csv", "text")


def flatten(payload: Any, prefix: str = "") -> List[Tuple[str, Any]]:
    """Nested dicts become dotted keys; lists of scalars are joined by spaces"""
    if isinstance(payload, dict):
        items: List[Tuple[str, Any]] = []
        for key, value in payload.items():
            name = f"{prefix}.{key}" if prefix else str(key)
            items.extend(flatten(value, name))
        return items
    if isinstance(payload, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in payload):
            return [(prefix, " ".join(str(v) for v in payload))]
        items = []
        for i, value in enumerate(payload):
            items.extend(flatten(value, f"{prefix}.{i}" if prefix else str(i)))
        return items
    return [(prefix, payload)]


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    return str(value)


def _table_rows(records: List[Dict[str, Any]]) -> Tuple[List[str], List[List[str]]]:
    header: List[str] = []
    rows = []
    for record in records:
        flat = dict(flatten(record))
        for key in flat:
            if key not in header:
                header.append(key)
        rows.append(flat)
    return header, [[_cell(row.get(key)) for key in header] for row in rows]


def to_csv(payload: Any) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if isinstance(payload, list):
        header, rows = _table_rows(payload)
        writer.writerow(header)
        writer.writerows(rows)
    else:
        writer.writerow(["key", "value"])
        writer.writerows([key, _cell(value)] for key, value in flatten(payload))
    return buffer.getvalue()


def to_text(payload: Any) -> str:
    if isinstance(payload, list):
        header, rows = _table_rows(payload)
        widths = [max([len(h)] + [len(r[i]) for r in rows]) for i, h in enumerate(header)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
        lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
        return "\n".join(line.rstrip() for line in lines) + "\n"
    pairs = flatten(payload)
    width = max((len(k) for k, _ in pairs), default=0)
    return "\n".join(f"{k.ljust(width)}: {_cell(v)}" for k, v in pairs) + "\n"


def render(payload: Any, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        return to_csv(payload)
    if fmt == "text":
        return to_text(payload)
    raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")
