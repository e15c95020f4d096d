"""Typed CSV files: a header row of names, then a row of kinds (``cont``/``cat``)."""
from __future__ import annotations

import csv
import os
from pathlib import Path

import numpy as np

from .data_model import Column, DataError, Kind, MixedDataset

DEFAULT_NA = os.environ.get("FAMDIMPUTE_NA", "NA")


class ParseError(DataError):
    pass


def format_real(v: float) -> str:
    return format(float(v), ".17g")


def read_dataset(path, na: str | None = None) -> MixedDataset:
    na = DEFAULT_NA if na is None else na
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise ParseError(f"{path}: need a header row and a kinds row")
    names, kinds = rows[0], rows[1]
    if len(kinds) != len(names):
        raise ParseError(f"{path}: row 2 has {len(kinds)} fields, expected {len(names)}")
    body = rows[2:]
    cols = []
    for k, (name, kind) in enumerate(zip(names, kinds)):
        kind = kind.strip()
        if kind not in ("cont", "cat"):
            raise ParseError(f"{path}: row 2, column {k + 1} ({name!r}): kind must be 'cont' or 'cat', got {kind!r}")
        cells = []
        for r, row in enumerate(body, start=3):
            if len(row) != len(names):
                raise ParseError(f"{path}: row {r} has {len(row)} fields, expected {len(names)}")
            cell = row[k]
            if cell == na:
                cells.append(None)
            elif kind == "cont":
                try:
                    cells.append(float(cell))
                except ValueError:
                    raise ParseError(f"{path}: row {r}, column {k + 1} ({name!r}): not a number: {cell!r}") from None
            else:
                cells.append(cell)
        try:
            col = Column.continuous(name, cells) if kind == "cont" else Column.categorical(name, cells)
        except DataError as exc:
            raise ParseError(f"{path}: column {k + 1} ({name!r}): {exc}") from None
        cols.append(col)
    try:
        return MixedDataset(tuple(cols))
    except DataError as exc:
        raise ParseError(f"{path}: {exc}") from None


def write_dataset(ds: MixedDataset, path, na: str | None = None) -> None:
    na = DEFAULT_NA if na is None else na
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(ds.names)
        out.writerow([c.kind.value for c in ds.columns])
        for i in range(ds.n_rows):
            row = []
            for c in ds.columns:
                if c.missing[i]:
                    row.append(na)
                elif c.kind is Kind.CONTINUOUS:
                    row.append(format_real(c.values[i]))
                else:
                    row.append(c.values[i])
            out.writerow(row)


def write_mask(mask: np.ndarray, names, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(names)
        out.writerows(np.asarray(mask, dtype=int).tolist())


def read_mask(path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError(f"{path}: empty mask file")
    names = rows[0]
    try:
        mask = np.array([[int(v) for v in row] for row in rows[1:]], dtype=int)
    except ValueError:
        raise ParseError(f"{path}: mask cells must be 0 or 1") from None
    if mask.size and not np.isin(mask, (0, 1)).all():
        raise ParseError(f"{path}: mask cells must be 0 or 1")
    return names, mask.reshape(len(rows) - 1, len(names)).astype(bool)


def write_fuzzy(fz, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow([name if lab is None else f"{name}.{lab}" for name, lab in fz.layout])
        for row in fz.values:
            out.writerow([format_real(v) for v in row])


def write_table(rows, header, path) -> None:
    """Write rows as CSV to ``path``, or to an open text stream."""
    if hasattr(path, "write"):
        _write_rows(path, rows, header)
        return
    with open(path, "w", newline="") as fh:
        _write_rows(fh, rows, header)


def _write_rows(fh, rows, header):
    out = csv.writer(fh, lineterminator="\n")
    out.writerow(header)
    for row in rows:
        out.writerow([format_real(v) if isinstance(v, (float, np.floating)) else v for v in row])


def write_manifest(path, items: dict) -> None:
    """Line-oriented ``key=value`` manifest."""
    Path(path).write_text("".join(f"{k}={v}\n" for k, v in items.items()))


def read_manifest(path) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        if line and "=" in line:
            k, v = line.split("=", 1)
            out[k] = v
    return out
