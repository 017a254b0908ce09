"""Result tables and report emission.

A run produces a flat table of rows (experiment id, parameter tuple,
measured, reference, ratio, error estimate) plus a provenance block naming
the config hash, seed, and toolkit version. Rows are kept sorted by a
type-stable key so that emission is bit-for-bit reproducible regardless of
the order in which results were produced.

Two formats are emitted. CSV carries the provenance as leading comment
lines; columns are fixed as experiment, params, measured, reference, ratio,
error, with the parameter tuple joined by ';' inside one cell. JSON uses the
versioned schema tag "jumpkit/result-table/v1". Floats are rendered with
repr, the shortest round-tripping form, in both formats.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from ..errors import InvalidArgumentError

SCHEMA = "jumpkit/result-table/v1"
CSV_COLUMNS = ("experiment", "params", "measured", "reference", "ratio", "error")

ParamValue = "int | float | str"


@dataclass(frozen=True)
class ResultRow:
    """One measured quantity against its reference."""

    experiment: str
    params: tuple
    measured: float
    reference: float
    ratio: float
    error: float = 0.0

    def __post_init__(self):
        for x in self.params:
            if not isinstance(x, (int, float, str)):
                raise InvalidArgumentError("params entries must be int, float, or str")
            if isinstance(x, str) and (";" in x or "," in x or "\n" in x):
                raise InvalidArgumentError("string params must not contain ';', ',' or newlines")


def _param_key(params: tuple) -> tuple:
    # numbers sort before strings, numbers among themselves by value;
    # bool is banned implicitly since configs never produce it
    return tuple(
        (0, float(x), "") if isinstance(x, (int, float)) else (1, 0.0, x)
        for x in params
    )


def _row_key(row: ResultRow) -> tuple:
    return (row.experiment, _param_key(row.params), len(row.params))


def _format_param(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def _parse_param(token: str):
    try:
        return int(token)
    except ValueError:
        pass
    try:
        f = float(token)
    except ValueError:
        return token
    # "inf"/"nan" style tokens stay strings so that string params like the
    # infinite variation exponent survive a CSV round trip
    return f if math.isfinite(f) else token


@dataclass(frozen=True)
class ResultTable:
    """Sorted result rows plus the provenance that reproduces them."""

    kind: str
    config_hash: str
    seed: int
    version: str
    rows: tuple[ResultRow, ...]
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(sorted(self.rows, key=_row_key)))
        for note in self.notes:
            if "\n" in note:
                raise InvalidArgumentError("notes must be single lines")

    def find(self, experiment: str, params: tuple | None = None) -> list[ResultRow]:
        out = [r for r in self.rows if r.experiment == experiment]
        if params is not None:
            out = [r for r in out if r.params == params]
        return out


def render_report(table: ResultTable, format: str) -> str:
    """Serialize a table; the same table always yields the same bytes."""
    if format == "csv":
        lines = [
            f"# {SCHEMA}",
            f"# kind: {table.kind}",
            f"# config: {table.config_hash}",
            f"# seed: {table.seed}",
            f"# version: {table.version}",
        ]
        lines += [f"# note: {note}" for note in table.notes]
        lines.append(",".join(CSV_COLUMNS))
        for r in table.rows:
            params = ";".join(_format_param(x) for x in r.params)
            lines.append(
                f"{r.experiment},{params},{r.measured!r},{r.reference!r},"
                f"{r.ratio!r},{r.error!r}"
            )
        return "\n".join(lines) + "\n"
    if format == "json":
        payload = {
            "schema": SCHEMA,
            "kind": table.kind,
            "config_hash": table.config_hash,
            "seed": table.seed,
            "version": table.version,
            "notes": list(table.notes),
            "rows": [
                {
                    "experiment": r.experiment,
                    "params": list(r.params),
                    "measured": r.measured,
                    "reference": r.reference,
                    "ratio": r.ratio,
                    "error": r.error,
                }
                for r in table.rows
            ],
        }
        return json.dumps(payload, indent=2) + "\n"
    raise InvalidArgumentError(f"unknown report format {format!r}; use csv or json")


def parse_report(text: str, format: str) -> ResultTable:
    """Inverse of render_report, sufficient for round-trip checks."""
    if format == "csv":
        meta: dict[str, str] = {}
        notes: list[str] = []
        rows: list[ResultRow] = []
        header_seen = False
        for line in text.splitlines():
            if not line:
                continue
            if line.startswith("# "):
                body = line[2:]
                if body == SCHEMA:
                    continue
                key, _, value = body.partition(": ")
                if key == "note":
                    notes.append(value)
                else:
                    meta[key] = value
                continue
            if not header_seen:
                if line != ",".join(CSV_COLUMNS):
                    raise InvalidArgumentError("unexpected CSV header")
                header_seen = True
                continue
            cells = line.split(",")
            if len(cells) != len(CSV_COLUMNS):
                raise InvalidArgumentError(f"malformed CSV row: {line!r}")
            params = tuple(_parse_param(t) for t in cells[1].split(";")) if cells[1] else ()
            rows.append(
                ResultRow(
                    experiment=cells[0],
                    params=params,
                    measured=float(cells[2]),
                    reference=float(cells[3]),
                    ratio=float(cells[4]),
                    error=float(cells[5]),
                )
            )
        if not header_seen or "config" not in meta:
            raise InvalidArgumentError("missing CSV header or provenance")
        return ResultTable(
            kind=meta.get("kind", ""),
            config_hash=meta["config"],
            seed=int(meta.get("seed", "0")),
            version=meta.get("version", ""),
            rows=tuple(rows),
            notes=tuple(notes),
        )
    if format == "json":
        payload = json.loads(text)
        if payload.get("schema") != SCHEMA:
            raise InvalidArgumentError(f"unknown schema {payload.get('schema')!r}")
        rows = tuple(
            ResultRow(
                experiment=r["experiment"],
                params=tuple(r["params"]),
                measured=r["measured"],
                reference=r["reference"],
                ratio=r["ratio"],
                error=r["error"],
            )
            for r in payload["rows"]
        )
        return ResultTable(
            kind=payload["kind"],
            config_hash=payload["config_hash"],
            seed=payload["seed"],
            version=payload["version"],
            rows=rows,
            notes=tuple(payload["notes"]),
        )
    raise InvalidArgumentError(f"unknown report format {format!r}; use csv or json")


def emit_report(table: ResultTable, format: str, path: str) -> None:
    """Write a rendered report; newlines are LF regardless of platform."""
    text = render_report(table, format)
    try:
        with open(path, "wb") as fh:
            fh.write(text.encode("utf-8"))
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
