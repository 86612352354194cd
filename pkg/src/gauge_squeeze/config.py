"""Flat key = value configuration files and --set overrides.

Syntax: one ``key = value`` pair per line, ``#`` starts a comment, blank
lines ignored.  Keys are snake_case and drawn from the SystemParams field
set plus the per-subcommand keys below; unknown or duplicate keys are
rejected by name.
"""

from __future__ import annotations

import math

from .errors import ConfigError
from .model import ACOUSTIC_RESONANCE, RED_SIDEBAND, SystemParams
from .sweep import OBSERVABLE_COLUMNS, DynamicsConfig, SweepAxis, SweepSpec

__all__ = [
    "PARAM_KEYS",
    "SWEEP_KEYS",
    "DYNAMICS_KEYS",
    "WIGNER_KEYS",
    "parse_config_text",
    "load_config",
    "apply_overrides",
    "params_from_mapping",
    "sweep_spec_from_mapping",
    "dynamics_config_from_mapping",
]

PARAM_KEYS = frozenset(SystemParams.field_names())
SWEEP_KEYS = frozenset(
    {
        "axis1_param", "axis1_min", "axis1_max", "axis1_count",
        "axis2_param", "axis2_min", "axis2_max", "axis2_count",
        "observables", "output",
    }
)
DYNAMICS_KEYS = frozenset(
    {"t_end", "dt", "samples", "output", "wigner_output", "wigner_points", "wigner_extent"}
)
WIGNER_KEYS = frozenset({"output", "wigner_points", "wigner_extent"})


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """Parse flat key = value text; duplicate or malformed entries are errors."""
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        if key in mapping:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        mapping[key] = value
    return mapping


def load_config(path: str) -> dict[str, str]:
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, source=path)


def apply_overrides(mapping: dict[str, str], overrides: list[str]) -> dict[str, str]:
    """Apply repeated --set key=value overrides on top of a config mapping."""
    merged = dict(mapping)
    for item in overrides:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        merged[key] = value.strip()
    return merged


def check_known_keys(mapping: dict[str, str], allowed: frozenset, context: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r} for {context}")


def _parse_float(key: str, value: str) -> float:
    try:
        result = float(value)
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: expected a number, got {value!r}") from exc
    if not math.isfinite(result):
        raise ConfigError(f"key {key!r}: value must be finite, got {value!r}")
    return result


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: expected an integer, got {value!r}") from exc


def params_from_mapping(mapping: dict[str, str]) -> SystemParams:
    """SystemParams from the parameter subset of a config mapping."""
    changes: dict = {}
    for key in PARAM_KEYS & set(mapping):
        value = mapping[key]
        if key == "Delta_tilde" and value == RED_SIDEBAND:
            changes[key] = value
        elif key == "Delta_a" and value == ACOUSTIC_RESONANCE:
            changes[key] = value
        else:
            changes[key] = _parse_float(key, value)
    try:
        return SystemParams(**changes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _axis_from_mapping(mapping: dict[str, str], label: str) -> SweepAxis | None:
    keys = [f"{label}_param", f"{label}_min", f"{label}_max", f"{label}_count"]
    present = [k for k in keys if k in mapping]
    if not present:
        return None
    missing = [k for k in keys if k not in mapping]
    if missing:
        raise ConfigError(f"incomplete axis definition: missing key {missing[0]!r}")
    try:
        return SweepAxis(
            param=mapping[keys[0]],
            lo=_parse_float(keys[1], mapping[keys[1]]),
            hi=_parse_float(keys[2], mapping[keys[2]]),
            count=_parse_int(keys[3], mapping[keys[3]]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def sweep_spec_from_mapping(mapping: dict[str, str]) -> SweepSpec:
    check_known_keys(mapping, PARAM_KEYS | SWEEP_KEYS, "sweep")
    base = params_from_mapping(mapping)
    axis1 = _axis_from_mapping(mapping, "axis1")
    if axis1 is None:
        raise ConfigError("sweep needs at least axis1_param/axis1_min/axis1_max/axis1_count")
    axis2 = _axis_from_mapping(mapping, "axis2")
    observables = tuple(OBSERVABLE_COLUMNS)
    if "observables" in mapping:
        observables = tuple(x.strip() for x in mapping["observables"].split(",") if x.strip())
    try:
        return SweepSpec(
            base=base,
            axis1=axis1,
            axis2=axis2,
            observables=observables,
            output_path=mapping.get("output"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def dynamics_config_from_mapping(mapping: dict[str, str]) -> DynamicsConfig:
    check_known_keys(mapping, PARAM_KEYS | DYNAMICS_KEYS, "dynamics")
    params = params_from_mapping(mapping)
    kwargs: dict = {}
    if "t_end" in mapping and mapping["t_end"] != "auto":
        kwargs["t_end"] = _parse_float("t_end", mapping["t_end"])
    if "dt" in mapping:
        kwargs["dt"] = _parse_float("dt", mapping["dt"])
    if "samples" in mapping:
        kwargs["samples"] = _parse_int("samples", mapping["samples"])
    if "wigner_points" in mapping:
        kwargs["wigner_points"] = _parse_int("wigner_points", mapping["wigner_points"])
    if "wigner_extent" in mapping:
        kwargs["wigner_extent"] = _parse_float("wigner_extent", mapping["wigner_extent"])
    return DynamicsConfig(params=params, **kwargs)
