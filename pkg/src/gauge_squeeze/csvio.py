"""CSV serialization of sweep, time-series and Wigner-grid datasets.

Normative layout: first line ``# gauge-squeeze v<version>``, then metadata
lines (``# timestamp: ...``, ``# param_hash: ...``, one ``# cfg key = value``
line per configuration entry), the column header row, and the data rows.
Numbers use the shortest round-trip decimal; missing values are empty
fields, never NaN; booleans are ``true``/``false``.  Bodies are
byte-reproducible for identical configurations (only the timestamp line
varies).
"""

from __future__ import annotations

import numpy as np

from . import __version__
from .errors import ConfigError
from .sweep import DynamicsResult, SweepDataset, SweepRecord
from .observables import WignerGrid

__all__ = [
    "format_value",
    "write_sweep_csv",
    "read_sweep_csv",
    "write_series_csv",
    "write_wigner_csv",
    "LoadedSweep",
]

_MAGIC = "# gauge-squeeze v"


def format_value(value) -> str:
    """Shortest round-trip formatting; empty field for missing values."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    value = float(value)
    if not np.isfinite(value):
        return ""  # NaN/inf are never emitted
    return repr(value)


def _header_lines(metadata: dict, cfg_lines: list[str]) -> list[str]:
    lines = [f"{_MAGIC}{metadata.get('version', __version__)}"]
    if "timestamp" in metadata:
        lines.append(f"# timestamp: {metadata['timestamp']}")
    if "param_hash" in metadata:
        lines.append(f"# param_hash: {metadata['param_hash']}")
    lines.extend(f"# cfg {line}" for line in cfg_lines)
    return lines


def write_sweep_csv(dataset: SweepDataset, path: str) -> None:
    spec = dataset.spec
    axis_cols = ["axis1"] if spec.axis2 is None else ["axis1", "axis2"]
    columns = axis_cols + list(spec.observables)
    lines = _header_lines(dataset.metadata, spec.echo_lines())
    lines.append(",".join(columns))
    for record in dataset.records:
        row = [format_value(record.axis1)]
        if spec.axis2 is not None:
            row.append(format_value(record.axis2))
        row.extend(format_value(record.values.get(name)) for name in spec.observables)
        lines.append(",".join(row))
    _write_lines(path, lines)


class LoadedSweep:
    """Sweep CSV parsed back into records, metadata and column names."""

    def __init__(self, columns: list[str], records: list[SweepRecord], cfg: dict, version: str):
        self.columns = columns
        self.records = records
        self.cfg = cfg
        self.version = version


def _parse_field(text: str):
    if text == "":
        return None
    if text == "true":
        return True
    if text == "false":
        return False
    return float(text)


def read_sweep_csv(path: str) -> LoadedSweep:
    try:
        with open(path, encoding="utf-8") as handle:
            lines = [line.rstrip("\n") for line in handle]
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if not lines or not lines[0].startswith(_MAGIC):
        raise ConfigError(f"{path}: missing '{_MAGIC}<version>' header line")
    version = lines[0][len(_MAGIC):]
    cfg: dict = {}
    header_row = None
    data_start = None
    for i, line in enumerate(lines[1:], start=1):
        if line.startswith("# cfg "):
            body = line[len("# cfg "):]
            key, _, value = body.partition("=")
            cfg[key.strip()] = value.strip()
        elif line.startswith("#") or not line.strip():
            continue
        else:
            header_row = line
            data_start = i + 1
            break
    if header_row is None:
        raise ConfigError(f"{path}: no column header row found")
    columns = header_row.split(",")
    if not columns or columns[0] != "axis1":
        raise ConfigError(f"{path}: first column must be 'axis1', got {columns[:1]}")
    has_axis2 = len(columns) > 1 and columns[1] == "axis2"
    records = []
    for line in lines[data_start:]:
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(columns):
            raise ConfigError(
                f"{path}: row has {len(parts)} fields, header has {len(columns)}"
            )
        fields = [_parse_field(p) for p in parts]
        axis1 = fields[0]
        axis2 = fields[1] if has_axis2 else None
        offset = 2 if has_axis2 else 1
        values = dict(zip(columns[offset:], fields[offset:]))
        if "stable" in values and values["stable"] is None:
            values["stable"] = False
        records.append(SweepRecord(axis1=axis1, axis2=axis2, values=values))
    return LoadedSweep(columns=columns, records=records, cfg=cfg, version=version)


def write_series_csv(result: DynamicsResult, path: str, cfg_lines: list[str]) -> None:
    lines = _header_lines(result.metadata, cfg_lines)
    lines.append("time,var_q,var_p")
    for t, q, p in zip(result.times, result.var_q, result.var_p):
        lines.append(f"{format_value(t)},{format_value(q)},{format_value(p)}")
    _write_lines(path, lines)


def write_wigner_csv(grid: WignerGrid, path: str, metadata: dict, cfg_lines: list[str]) -> None:
    meta = dict(metadata)
    for key in ("var_q", "var_p", "cov_qp"):
        if key in meta:
            cfg_lines = cfg_lines + [f"{key} = {format_value(meta[key])}"]
    lines = _header_lines(meta, cfg_lines)
    lines.append("q,p,w")
    for i, q in enumerate(grid.q_axis):
        for j, p in enumerate(grid.p_axis):
            lines.append(
                f"{format_value(q)},{format_value(p)},{format_value(grid.w[i, j])}"
            )
    _write_lines(path, lines)


def _write_lines(path: str, lines: list[str]) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from exc
