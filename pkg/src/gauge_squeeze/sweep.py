"""Experiment engine: grid sweeps, optimum lookup, dynamics runs.

Grid points are evaluated independently (optionally across worker threads,
capped by the GAUGE_SQUEEZE_THREADS environment variable) and merged in
row-major order over the axes, so serial and parallel executions produce
identical datasets.
"""

from __future__ import annotations

import hashlib
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .dynamics import (
    default_initial_covariance,
    evolve_covariance,
    solve_lyapunov,
    stability_report,
)
from .errors import GaugeSqueezeError, NoStablePoints, UnstableSystem
from .model import SystemParams, build_system
from .observables import (
    WignerGrid,
    lab_frame_block,
    mechanical_state,
    momentum_variance,
    position_variance,
    wigner_grid,
)

__all__ = [
    "OBSERVABLE_COLUMNS",
    "SweepAxis",
    "SweepSpec",
    "SweepRecord",
    "SweepDataset",
    "evaluate_point",
    "run_sweep",
    "find_optimum",
    "DynamicsConfig",
    "DynamicsResult",
    "run_dynamics_experiment",
]

#: Normative observable column order for datasets and CSV output.
OBSERVABLE_COLUMNS = ("var_q", "squeeze_db", "n_eff", "var_p", "stable", "spectral_abscissa")


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter: name, closed range and grid count."""

    param: str
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if self.param not in SystemParams.field_names():
            raise ValueError(f"unknown sweep parameter {self.param!r}")
        if self.count < 2:
            raise ValueError(f"axis count must be >= 2, got {self.count}")
        if not self.lo < self.hi:
            raise ValueError(f"axis range must satisfy min < max, got [{self.lo}, {self.hi}]")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """A 1D or 2D sweep protocol over SystemParams fields."""

    base: SystemParams
    axis1: SweepAxis
    axis2: SweepAxis | None = None
    observables: tuple[str, ...] = OBSERVABLE_COLUMNS
    output_path: str | None = None

    def __post_init__(self):
        unknown = [o for o in self.observables if o not in OBSERVABLE_COLUMNS]
        if unknown:
            raise ValueError(f"unknown observables {unknown}; allowed: {OBSERVABLE_COLUMNS}")
        ordered = tuple(o for o in OBSERVABLE_COLUMNS if o in self.observables)
        object.__setattr__(self, "observables", ordered)

    def echo_lines(self) -> list[str]:
        """Canonical key = value echo of the spec (used for CSV metadata and hashing)."""
        lines = []
        for name in SystemParams.field_names():
            lines.append(f"{name} = {_fmt(getattr(self.base, name))}")
        for label, axis in (("axis1", self.axis1), ("axis2", self.axis2)):
            if axis is None:
                continue
            lines.append(f"{label}_param = {axis.param}")
            lines.append(f"{label}_min = {_fmt(axis.lo)}")
            lines.append(f"{label}_max = {_fmt(axis.hi)}")
            lines.append(f"{label}_count = {axis.count}")
        lines.append("observables = " + ",".join(self.observables))
        return lines

    def param_hash(self) -> str:
        digest = hashlib.sha256("\n".join(self.echo_lines()).encode()).hexdigest()
        return digest[:16]


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(float(value))


@dataclass(frozen=True)
class SweepRecord:
    """One grid point: axis values, observable values, error note if any."""

    axis1: float
    axis2: float | None
    values: dict
    error: str | None = None

    @property
    def stable(self) -> bool:
        return bool(self.values.get("stable"))


@dataclass
class SweepDataset:
    """Gridded sweep results plus reproducibility metadata."""

    spec: SweepSpec
    records: list[SweepRecord]
    metadata: dict = field(default_factory=dict)

    def grid_shape(self) -> tuple[int, ...]:
        if self.spec.axis2 is None:
            return (self.spec.axis1.count,)
        return (self.spec.axis1.count, self.spec.axis2.count)


def evaluate_point(params: SystemParams) -> dict:
    """All observables for one parameter point.

    Unstable points keep their spectral abscissa and stable=False with null
    observables; evaluation failures are reported in the 'error' key rather
    than raised, so sweeps never abort on a single point.
    """
    out = {name: None for name in OBSERVABLE_COLUMNS}
    out["error"] = None
    try:
        eff, drift, diffusion = build_system(params)
        report = stability_report(drift)
        out["stable"] = report.stable
        out["spectral_abscissa"] = report.spectral_abscissa
        if report.stable:
            cov = solve_lyapunov(drift, diffusion, check_stability=False)
            state = mechanical_state(cov, eff.r)
            out["var_q"] = state.var_q
            out["var_p"] = state.var_p
            out["squeeze_db"] = state.squeeze_db
            out["n_eff"] = state.n_eff
    except (GaugeSqueezeError, ValueError) as exc:
        out = {name: None for name in OBSERVABLE_COLUMNS}
        out["stable"] = False
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out


def _grid_points(spec: SweepSpec) -> list[tuple[float, float | None, SystemParams]]:
    points = []
    for v1 in spec.axis1.values():
        changes = {spec.axis1.param: float(v1)}
        if spec.axis2 is None:
            points.append((float(v1), None, _safe_replace(spec.base, changes)))
        else:
            for v2 in spec.axis2.values():
                changes[spec.axis2.param] = float(v2)
                points.append((float(v1), float(v2), _safe_replace(spec.base, changes)))
    return points


def _safe_replace(base: SystemParams, changes: dict):
    try:
        return base.replace(**changes)
    except ValueError as exc:
        return exc  # deferred to evaluate time as a per-point error


def _worker_count(max_workers: int | None) -> int:
    env = os.environ.get("GAUGE_SQUEEZE_THREADS")
    cap = os.cpu_count() or 1
    if env is not None:
        try:
            cap = int(env)
        except ValueError as exc:
            raise ValueError(f"GAUGE_SQUEEZE_THREADS must be a positive integer, got {env!r}") from exc
        if cap < 1:
            raise ValueError(f"GAUGE_SQUEEZE_THREADS must be a positive integer, got {env!r}")
    if max_workers is not None:
        cap = min(cap, max_workers)
    return max(1, cap)


def run_sweep(spec: SweepSpec, max_workers: int | None = None) -> SweepDataset:
    """Evaluate the full grid; deterministic row-major record order."""
    points = _grid_points(spec)

    def evaluate(entry):
        v1, v2, params = entry
        if isinstance(params, Exception):
            values = {name: None for name in OBSERVABLE_COLUMNS}
            values["stable"] = False
            return SweepRecord(v1, v2, values, error=f"ValueError: {params}")
        values = evaluate_point(params)
        error = values.pop("error")
        return SweepRecord(v1, v2, values, error=error)

    workers = _worker_count(max_workers)
    if workers == 1 or len(points) < 64:
        records = [evaluate(p) for p in points]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunk = max(16, len(points) // (workers * 8))
            records = list(pool.map(evaluate, points, chunksize=chunk))
    metadata = {
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "param_hash": spec.param_hash(),
    }
    return SweepDataset(spec=spec, records=records, metadata=metadata)


def find_optimum(dataset: SweepDataset, observable: str) -> tuple[tuple[float, ...], float]:
    """Grid argmax of an observable over stable points.

    Ties resolve to the lowest axis1 value, then lowest axis2 value (the
    first record in row-major order), so the result is deterministic.
    Raises NoStablePoints when nothing qualifies.
    """
    if observable not in OBSERVABLE_COLUMNS:
        raise ValueError(f"unknown observable {observable!r}")
    best_record = None
    best_value = None
    for record in dataset.records:
        if not record.stable or record.error is not None:
            continue
        value = record.values.get(observable)
        if value is None:
            continue
        if best_value is None or value > best_value:
            best_value = value
            best_record = record
    if best_record is None:
        raise NoStablePoints(f"no stable grid point carries {observable!r}")
    axes = (best_record.axis1,) if best_record.axis2 is None else (
        best_record.axis1,
        best_record.axis2,
    )
    return axes, float(best_value)


@dataclass(frozen=True)
class DynamicsConfig:
    """Protocol for a covariance time-evolution experiment."""

    params: SystemParams
    t_end: float | None = None  # default: 15 / |spectral abscissa|
    dt: float = 0.01
    samples: int = 2000
    wigner_points: int = 201
    wigner_extent: float = 5.0  # in units of the larger final standard deviation

    def echo_lines(self) -> list[str]:
        lines = [
            f"{name} = {_fmt(getattr(self.params, name))}"
            for name in SystemParams.field_names()
        ]
        lines.append(f"t_end = {_fmt(self.t_end) if self.t_end is not None else 'auto'}")
        lines.append(f"dt = {_fmt(self.dt)}")
        lines.append(f"samples = {self.samples}")
        lines.append(f"wigner_points = {self.wigner_points}")
        lines.append(f"wigner_extent = {_fmt(self.wigner_extent)}")
        return lines


@dataclass
class DynamicsResult:
    """Lab-frame variance traces and the final-state Wigner grid."""

    times: np.ndarray
    var_q: np.ndarray
    var_p: np.ndarray
    wigner: WignerGrid
    final_v_lab: np.ndarray
    metadata: dict


def run_dynamics_experiment(config: DynamicsConfig) -> DynamicsResult:
    """Integrate the covariance from the squeezed-frame thermal state.

    Produces var_q(t) and var_p(t) in the lab frame plus the Wigner grid of
    the final mechanical state.  Requires dynamically stable parameters.
    """
    eff, drift, diffusion = build_system(config.params)
    report = stability_report(drift)
    if not report.stable:
        raise UnstableSystem(
            f"dynamics experiment needs stable parameters; abscissa "
            f"{report.spectral_abscissa:.3e}"
        )
    t_end = config.t_end
    if t_end is None:
        t_end = 15.0 / abs(report.spectral_abscissa)
    v0 = default_initial_covariance(config.params.n_th, eff.r)
    trajectory = evolve_covariance(
        drift, diffusion, v0, t_end=t_end, dt=config.dt, n_samples=config.samples
    )
    var_q = np.array([position_variance(v, eff.r) for v in trajectory.values])
    var_p = np.array([momentum_variance(v, eff.r) for v in trajectory.values])
    v_lab = lab_frame_block(trajectory.final, eff.r)
    grid = wigner_grid(
        v_lab, points=config.wigner_points, extent_sigmas=config.wigner_extent
    )
    metadata = {
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "var_q": float(var_q[-1]),
        "var_p": float(var_p[-1]),
        "cov_qp": float(v_lab[0, 1]),
    }
    return DynamicsResult(
        times=trajectory.times,
        var_q=var_q,
        var_p=var_p,
        wigner=grid,
        final_v_lab=v_lab,
        metadata=metadata,
    )
