"""Read-only parsing of gauge-squeeze CSV datasets.

The renderer never alters data: the original header row and data rows are
retained verbatim so --dump-parsed can re-emit the numeric content
byte-identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

MAGIC = "# gauge-squeeze v"

SWEEP_OBSERVABLES = ("var_q", "squeeze_db", "n_eff", "var_p", "stable", "spectral_abscissa")


class SchemaError(Exception):
    """Input does not follow the gauge-squeeze CSV layout."""


class EmptyDataset(Exception):
    """No data rows after the column header."""


@dataclass
class ParsedTable:
    version: str
    cfg: dict
    columns: list[str]
    rows: list[list]          # parsed fields: float | bool | None
    raw_lines: list[str]      # column header + data rows, exactly as read

    @property
    def kind_hints(self) -> set[str]:
        cols = set(self.columns)
        hints = set()
        if {"axis1", "axis2"} <= cols:
            hints.add("heatmap")
        if "axis1" in cols and "axis2" not in cols:
            hints.add("lines")
        if {"time", "var_q", "var_p"} <= cols:
            hints.add("lines")
        if {"q", "p", "w"} <= cols:
            hints.add("wigner")
        return hints

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def _parse_field(text: str):
    if text == "":
        return None
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return float(text)
    except ValueError as exc:
        raise SchemaError(f"non-numeric field {text!r}") from exc


def parse_csv(path: str) -> ParsedTable:
    try:
        with open(path, encoding="utf-8") as handle:
            lines = [line.rstrip("\n") for line in handle]
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not lines or not lines[0].startswith(MAGIC):
        raise SchemaError(f"{path}: missing '{MAGIC}<version>' header line")
    version = lines[0][len(MAGIC):]
    cfg: dict = {}
    header = None
    data_lines: list[str] = []
    for line in lines[1:]:
        if line.startswith("# cfg "):
            key, _, value = line[len("# cfg "):].partition("=")
            cfg[key.strip()] = value.strip()
            continue
        if line.startswith("#") or (not line.strip() and header is None):
            continue
        if header is None:
            header = line
        elif line.strip():
            data_lines.append(line)
    if header is None:
        raise SchemaError(f"{path}: no column header row")
    columns = header.split(",")
    known_first = {"axis1", "time", "q"}
    if columns[0] not in known_first:
        raise SchemaError(
            f"{path}: first column must be one of {sorted(known_first)}, got {columns[0]!r}"
        )
    if columns[0] == "axis1":
        tail = columns[2:] if (len(columns) > 1 and columns[1] == "axis2") else columns[1:]
        unknown = [c for c in tail if c not in SWEEP_OBSERVABLES]
        if unknown:
            raise SchemaError(f"{path}: unknown sweep column {unknown[0]!r}")
    rows = []
    for line in data_lines:
        parts = line.split(",")
        if len(parts) != len(columns):
            raise SchemaError(
                f"{path}: row has {len(parts)} fields, header has {len(columns)}"
            )
        rows.append([_parse_field(p) for p in parts])
    if not rows:
        raise EmptyDataset(f"{path}: dataset has no rows")
    return ParsedTable(
        version=version,
        cfg=cfg,
        columns=columns,
        rows=rows,
        raw_lines=[header] + data_lines,
    )
