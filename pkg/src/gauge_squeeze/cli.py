"""Command-line interface.

Subcommands: sweep, dynamics, wigner, stability, optimum.  Every run is
deterministic (no randomness anywhere), so identical configurations yield
bit-identical CSV bodies.  Exit codes: 0 success, 1 usage or configuration
error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .config import (
    PARAM_KEYS,
    WIGNER_KEYS,
    apply_overrides,
    check_known_keys,
    dynamics_config_from_mapping,
    load_config,
    params_from_mapping,
    sweep_spec_from_mapping,
)
from .csvio import (
    format_value,
    read_sweep_csv,
    write_series_csv,
    write_sweep_csv,
    write_wigner_csv,
)
from .errors import ConfigError, GaugeSqueezeError, NoStablePoints
from .model import build_system
from .dynamics import stability_report
from .sweep import OBSERVABLE_COLUMNS, run_dynamics_experiment, run_sweep

__all__ = ["main", "build_parser"]

USAGE_ERROR = 1
NUMERICAL_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gauge-squeeze", description=__doc__)
    parser.add_argument("--version", action="version", version=f"gauge-squeeze {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_common(p):
        p.add_argument("--config", help="flat key = value config file")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override any config key (repeatable)",
        )

    p_sweep = sub.add_parser("sweep", help="run a 1D/2D parameter sweep to CSV")
    add_common(p_sweep)
    p_sweep.add_argument("--output", help="override the output CSV path")

    p_dyn = sub.add_parser("dynamics", help="time-evolve the covariance, emit series CSV")
    add_common(p_dyn)
    p_dyn.add_argument("--output", help="series CSV path (overrides config)")
    p_dyn.add_argument("--wigner-output", help="also write the final-state Wigner grid CSV")

    p_wig = sub.add_parser("wigner", help="steady-state Wigner grid to CSV")
    add_common(p_wig)
    p_wig.add_argument("--output", help="grid CSV path (overrides config)")

    p_stab = sub.add_parser("stability", help="print spectral abscissa and verdict")
    add_common(p_stab)
    p_stab.add_argument(
        "--omega-m-hz",
        type=float,
        help="physical omega_m / 2 pi in Hz, for display only",
    )

    p_opt = sub.add_parser("optimum", help="argmax row of a sweep CSV over stable points")
    p_opt.add_argument("--input", required=True, help="sweep CSV produced by this tool")
    p_opt.add_argument(
        "--observable",
        default="squeeze_db",
        choices=[c for c in OBSERVABLE_COLUMNS if c not in ("stable",)],
    )
    return parser


def _mapping_from_args(args) -> dict[str, str]:
    mapping = load_config(args.config) if args.config else {}
    return apply_overrides(mapping, args.overrides)


def _cmd_sweep(args) -> int:
    mapping = _mapping_from_args(args)
    spec = sweep_spec_from_mapping(mapping)
    output = args.output or spec.output_path
    if not output:
        raise ConfigError("sweep needs an output path ('output' key or --output)")
    dataset = run_sweep(spec)
    write_sweep_csv(dataset, output)
    errors = sum(1 for r in dataset.records if r.error is not None)
    unstable = sum(1 for r in dataset.records if not r.stable)
    print(
        f"wrote {output}: {len(dataset.records)} records, "
        f"{unstable} unstable, {errors} point errors"
    )
    return 0


def _cmd_dynamics(args) -> int:
    mapping = _mapping_from_args(args)
    config = dynamics_config_from_mapping(mapping)
    output = args.output or mapping.get("output")
    if not output:
        raise ConfigError("dynamics needs an output path ('output' key or --output)")
    result = run_dynamics_experiment(config)
    write_series_csv(result, output, config.echo_lines())
    print(f"wrote {output}: {len(result.times)} samples, final var_q={result.var_q[-1]:.6g}")
    wigner_output = args.wigner_output or mapping.get("wigner_output")
    if wigner_output:
        write_wigner_csv(result.wigner, wigner_output, result.metadata, config.echo_lines())
        print(f"wrote {wigner_output}: {result.wigner.w.size} grid values")
    return 0


def _cmd_wigner(args) -> int:
    from .dynamics import solve_lyapunov
    from .observables import lab_frame_block, wigner_grid

    mapping = _mapping_from_args(args)
    check_known_keys(mapping, PARAM_KEYS | WIGNER_KEYS, "wigner")
    params = params_from_mapping(mapping)
    output = args.output or mapping.get("output")
    if not output:
        raise ConfigError("wigner needs an output path ('output' key or --output)")
    eff, drift, diffusion = build_system(params)
    cov = solve_lyapunov(drift, diffusion)
    v_lab = lab_frame_block(cov, eff.r)
    points = int(mapping.get("wigner_points", "201"))
    extent = float(mapping.get("wigner_extent", "5.0"))
    grid = wigner_grid(v_lab, points=points, extent_sigmas=extent)
    metadata = {
        "version": __version__,
        "var_q": float(v_lab[0, 0]),
        "var_p": float(v_lab[1, 1]),
        "cov_qp": float(v_lab[0, 1]),
    }
    cfg_lines = [f"{k} = {mapping[k]}" for k in sorted(mapping)]
    write_wigner_csv(grid, output, metadata, cfg_lines)
    print(f"wrote {output}: {grid.w.size} grid values, normalization {grid.normalization_check:.6f}")
    return 0


def _cmd_stability(args) -> int:
    mapping = _mapping_from_args(args)
    check_known_keys(mapping, PARAM_KEYS, "stability")
    params = params_from_mapping(mapping)
    eff, drift, _ = build_system(params)
    report = stability_report(drift)
    print(f"spectral_abscissa = {format_value(report.spectral_abscissa)} [omega_m]")
    print(f"stable = {'true' if report.stable else 'false'}")
    print(f"method = {report.method}")
    print(f"routh_hurwitz_stable = {report.routh_hurwitz_stable}")
    print(f"r = {format_value(eff.r)}, omega_m_eff = {format_value(eff.omega_m_eff)} [omega_m]")
    if args.omega_m_hz is not None:
        hz = report.spectral_abscissa * args.omega_m_hz
        print(f"spectral_abscissa = {format_value(hz)} [Hz] (omega_m/2pi = {args.omega_m_hz} Hz)")
    return 0


def _cmd_optimum(args) -> int:
    loaded = read_sweep_csv(args.input)
    observable = args.observable
    if observable not in loaded.columns:
        raise ConfigError(f"column {observable!r} not present in {args.input}")
    best = None
    for record in loaded.records:
        if not record.values.get("stable"):
            continue
        value = record.values.get(observable)
        if value is None:
            continue
        if best is None or value > best.values[observable]:
            best = record
    if best is None:
        raise NoStablePoints(f"no stable row carries {observable!r} in {args.input}")
    parts = [f"axis1={format_value(best.axis1)}"]
    if best.axis2 is not None:
        parts.append(f"axis2={format_value(best.axis2)}")
    parts.append(f"{observable}={format_value(best.values[observable])}")
    print("optimum: " + " ".join(parts))
    return 0


_COMMANDS = {
    "sweep": _cmd_sweep,
    "dynamics": _cmd_dynamics,
    "wigner": _cmd_wigner,
    "stability": _cmd_stability,
    "optimum": _cmd_optimum,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"gauge-squeeze: config error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except GaugeSqueezeError as exc:
        print(f"gauge-squeeze: {type(exc).__name__}: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
