"""Readers for the sweep CSV, overlay CSV, and eigenvector sidecar formats.

All three formats start with `#` comment lines (config and version echoes)
which are skipped.  Numbers were written with repr, so float() recovers
them exactly.  `NA` marks absent values.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

EIG_COLUMNS = tuple(f"eig{i}" for i in range(1, 9))


class TableError(Exception):
    """Input file malformed or missing what the figure needs."""


def _data_lines(text: str) -> list[str]:
    return [line for line in text.splitlines() if line and not line.startswith("#")]


def read_csv_table(path, required=()) -> list[dict[str, str]]:
    lines = _data_lines(Path(path).read_text(encoding="utf-8"))
    if not lines:
        raise TableError(f"{path}: no header line")
    header = lines[0].split(",")
    missing = [column for column in required if column not in header]
    if missing:
        raise TableError(f"{path}: missing column(s) {', '.join(missing)}")
    rows = []
    for number, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise TableError(
                f"{path}: line {number} has {len(cells)} cells, expected {len(header)}")
        rows.append(dict(zip(header, cells)))
    if not rows:
        raise TableError(f"{path}: no data rows")
    return rows


def cell_float(row: dict[str, str], key: str) -> float | None:
    raw = row[key]
    if raw == "NA":
        return None
    try:
        return float(raw)
    except ValueError as exc:
        raise TableError(f"column {key} holds {raw!r}, not a number") from exc


def read_sweep(path, kind: str, extra=()) -> list[dict[str, str]]:
    """Rows of the requested matrix kind with usable numbers."""
    rows = read_csv_table(
        path, required=("n", "kind", "status") + EIG_COLUMNS + tuple(extra))
    kept = [row for row in rows if row["kind"] == kind and row["status"] == "ok"]
    if not kept:
        raise TableError(f"{path}: no usable kind={kind} rows")
    return kept


def eig_series(rows) -> list[list[tuple[float, float]]]:
    """Eight (n, eigenvalue) point lists; absent slots are skipped."""
    series = []
    for column in EIG_COLUMNS:
        points = []
        for row in rows:
            value = cell_float(row, column)
            if value is not None:
                points.append((float(row["n"]), value))
        series.append(points)
    return series


def read_overlay(path) -> list[tuple[float, float]]:
    rows = read_csv_table(path, required=("n", "overlay"))
    return [(float(row["n"]), float(row["overlay"])) for row in rows]


@dataclass(frozen=True)
class EigvecTable:
    n: int
    kind: str
    dim: int
    count: int
    vectors: list[list[float]]


def read_eigvecs(path) -> EigvecTable:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# mertens-eigvecs v1 "):
        raise TableError(f"{path}: not a mertens-eigvecs v1 sidecar")
    meta: dict[str, str] = {}
    for token in lines[0].split()[3:]:
        key, _, value = token.partition("=")
        meta[key] = value
    dim = int(meta["dim"])
    count = int(meta["count"])
    rows = _data_lines(text)
    if len(rows) != count:
        raise TableError(f"{path}: truncated: found {len(rows)} of {count} vectors")
    vectors = []
    for number, row in enumerate(rows, start=1):
        cells = row.split(",")
        if len(cells) != dim:
            raise TableError(
                f"{path}: vector {number} has {len(cells)} components, expected {dim}")
        vectors.append([float(cell) for cell in cells])
    return EigvecTable(n=int(meta["n"]), kind=meta["kind"], dim=dim,
                       count=count, vectors=vectors)
