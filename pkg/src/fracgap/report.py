"""Report emission: stable-schema CSV and JSON with deterministic formatting.

One report is one schema: a fixed column list and homogeneous rows. CSV is
RFC-4180 style with a header row and LF line endings; floats carry 17
significant digits so values round-trip exactly. JSON wraps the rows in an
envelope with the subcommand, its parameters and the artifact version.
Nothing volatile (timestamps, host names) enters the output unless the
caller explicitly passes a timing value, so identical inputs give identical
bytes.

Large sweeps pass whole numpy columns (``from_arrays``), which formats
column-wise instead of cell-by-cell; small reports pass plain row lists.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

_NEEDS_QUOTING = set(',"\r\n')


@dataclass
class Report:
    schema_id: str
    columns: list[str]
    rows: list[Sequence[Any]] = field(default_factory=list)
    parameters: dict[str, Any] = field(default_factory=dict)
    arrays: dict[str, np.ndarray] | None = None

    @classmethod
    def from_arrays(
        cls,
        schema_id: str,
        arrays: dict[str, np.ndarray],
        parameters: dict[str, Any] | None = None,
    ) -> "Report":
        sizes = {a.shape[0] for a in arrays.values()}
        if len(sizes) > 1:
            raise ValueError(f"ragged report columns: {sizes}")
        return cls(
            schema_id=schema_id,
            columns=list(arrays),
            parameters=parameters or {},
            arrays=arrays,
        )


def _plain(value: Any) -> Any:
    """Collapse numpy scalars to Python types."""
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def _json_safe(value: Any) -> Any:
    # NaN has no strict-JSON representation; emit null (CSV keeps "nan")
    value = _plain(value)
    if isinstance(value, float) and value != value:
        return None
    return value


def format_value(value: Any) -> str:
    value = _plain(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    text = str(value)
    if _NEEDS_QUOTING & set(text):
        return '"' + text.replace('"', '""') + '"'
    return text


def _format_column(arr: np.ndarray) -> list[str]:
    kind = arr.dtype.kind
    if kind == "f":
        return [format(v, ".17g") for v in arr.tolist()]
    if kind in "iu":
        return [str(v) for v in arr.tolist()]
    if kind == "b":
        return np.where(arr, "true", "false").tolist()
    return [format_value(v) for v in arr.tolist()]


def write_csv(report: Report, stream) -> None:
    stream.write(",".join(report.columns) + "\n")
    if report.arrays is not None:
        cols = [_format_column(report.arrays[name]) for name in report.columns]
        for parts in zip(*cols):
            stream.write(",".join(parts) + "\n")
    else:
        for row in report.rows:
            stream.write(",".join(format_value(v) for v in row) + "\n")


def _row_dicts(report: Report) -> list[dict[str, Any]]:
    if report.arrays is not None:
        lists = []
        for name in report.columns:
            arr = report.arrays[name]
            col = arr.tolist()
            if arr.dtype.kind == "f" and np.isnan(arr).any():
                col = [v if v == v else None for v in col]
            lists.append(col)
        return [dict(zip(report.columns, row)) for row in zip(*lists)]
    return [
        {c: _json_safe(v) for c, v in zip(report.columns, row)} for row in report.rows
    ]


def write_json(report: Report, stream, version: str, wall_time_s: float | None = None) -> None:
    envelope: dict[str, Any] = {
        "subcommand": report.schema_id,
        "parameters": {k: _plain(v) for k, v in sorted(report.parameters.items())},
        "version": version,
        "columns": report.columns,
        "rows": _row_dicts(report),
    }
    if wall_time_s is not None:
        envelope["wall_time_s"] = wall_time_s
    json.dump(envelope, stream, indent=2)
    stream.write("\n")


def render(report: Report, fmt: str, version: str, wall_time_s: float | None = None) -> str:
    buf = io.StringIO()
    if fmt == "csv":
        write_csv(report, buf)
    elif fmt == "json":
        write_json(report, buf, version, wall_time_s)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return buf.getvalue()
