"""Rendering of parsed gauge-squeeze tables into publication-style images."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.fonttype"] = "none"  # keep axis labels as text in SVG

import matplotlib.pyplot as plt
import numpy as np

from .parsing import ParsedTable, SchemaError

THREE_DB = 3.010299956639812
SQL_VARIANCE = 0.5
ZPF_RADIUS = math.sqrt(0.5)  # e^{-1/2} contour radius of the coherent state


class IncompatibleKind(Exception):
    """Requested plot kind does not fit the dataset's dimensionality."""


def default_observable(table: ParsedTable) -> str:
    for name in ("squeeze_db", "var_q", "n_eff", "var_p", "spectral_abscissa"):
        if name in table.columns:
            return name
    raise SchemaError("no observable column present")


def sweep_optimum(table: ParsedTable, column: str):
    """Row-major argmax over stable rows; ties keep the first row seen.

    Mirrors the primary tool's `optimum` subcommand so the marked cell and
    the printed line agree with it.
    """
    has_stable = "stable" in table.columns
    best = None
    for row in table.rows:
        values = dict(zip(table.columns, row))
        if has_stable and not values.get("stable"):
            continue
        value = values.get(column)
        if value is None or value is False:
            continue
        if best is None or value > best[column]:
            best = values
    return best


def _pivot_grid(table: ParsedTable, xcol: str, ycol: str, vcol: str):
    x = np.array([v for v in table.column(xcol)], dtype=float)
    y = np.array([v for v in table.column(ycol)], dtype=float)
    v = np.array(
        [np.nan if val is None else float(val) for val in table.column(vcol)]
    )
    xs = np.unique(x)
    ys = np.unique(y)
    if len(xs) * len(ys) != len(table.rows):
        raise SchemaError(
            f"grid is not complete: {len(xs)} x {len(ys)} axes but {len(table.rows)} rows"
        )
    grid = np.full((len(xs), len(ys)), np.nan)
    xi = np.searchsorted(xs, x)
    yi = np.searchsorted(ys, y)
    grid[xi, yi] = v
    return xs, ys, grid


def render_heatmap(table: ParsedTable, output: str, column: str | None = None,
                   xlabel: str | None = None, ylabel: str | None = None) -> dict:
    if "heatmap" not in table.kind_hints:
        raise IncompatibleKind("heatmap needs a 2D sweep dataset (axis1 and axis2 columns)")
    column = column or default_observable(table)
    if column not in table.columns:
        raise SchemaError(f"column {column!r} not present")
    xs, ys, grid = _pivot_grid(table, "axis1", "axis2", column)
    masked = np.ma.masked_invalid(grid.T)  # axis1 horizontal, axis2 vertical
    fig, ax = plt.subplots(figsize=(6.0, 4.6))
    mesh = ax.pcolormesh(xs, ys, masked, shading="nearest", cmap="viridis")
    mesh.cmap.set_bad("lightgray")
    fig.colorbar(mesh, ax=ax, label=column)
    ax.set_xlabel(xlabel or table.cfg.get("axis1_param", "axis1"))
    ax.set_ylabel(ylabel or table.cfg.get("axis2_param", "axis2"))
    best = sweep_optimum(table, column)
    if best is not None:
        ax.plot(best["axis1"], best["axis2"], marker="*", markersize=12,
                markerfacecolor="white", markeredgecolor="black")
    fig.savefig(output, bbox_inches="tight")
    plt.close(fig)
    return best


def render_lines(table: ParsedTable, output: str, column: str | None = None,
                 db_limit: bool = False, sql_line: bool = False,
                 xlabel: str | None = None, ylabel: str | None = None) -> dict | None:
    if "lines" not in table.kind_hints:
        raise IncompatibleKind("lines needs a 1D sweep or a time-series dataset")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    best = None
    if "time" in table.columns:
        t = np.array(table.column("time"), dtype=float)
        for name, style in (("var_q", "-"), ("var_p", "--")):
            y = np.array(table.column(name), dtype=float)
            ax.plot(t, y, style, label=name)
        ax.set_xlabel(xlabel or "time [1/omega_m]")
        ax.set_ylabel(ylabel or "variance")
        ax.set_yscale("log")
        ax.legend()
    else:
        column = column or default_observable(table)
        if column not in table.columns:
            raise SchemaError(f"column {column!r} not present")
        x = np.array(table.column("axis1"), dtype=float)
        y = np.array([np.nan if v is None else float(v) for v in table.column(column)])
        ax.plot(x, y, "-", label=column)
        ax.set_xlabel(xlabel or table.cfg.get("axis1_param", "axis1"))
        ax.set_ylabel(ylabel or column)
        best = sweep_optimum(table, column)
        ax.legend()
    if db_limit:
        lo = min(ax.get_ylim()[0], 0.0)
        ax.axhspan(lo, THREE_DB, color="0.85", zorder=0)
        ax.axhline(THREE_DB, color="0.4", linestyle=":", linewidth=1)
    if sql_line:
        ax.axhline(SQL_VARIANCE, color="k", linestyle=":", linewidth=1, label="SQL")
    fig.savefig(output, bbox_inches="tight")
    plt.close(fig)
    return best


def _ellipse_points(v2: np.ndarray, n: int = 256) -> np.ndarray:
    """Points of the e^{-1/2} level set u^T V^{-1} u = 1."""
    eigvals, eigvecs = np.linalg.eigh(v2)
    t = np.linspace(0.0, 2.0 * math.pi, n)
    circle = np.vstack([np.cos(t), np.sin(t)])
    return eigvecs @ (np.sqrt(np.maximum(eigvals, 0.0))[:, None] * circle)


def render_wigner(table: ParsedTable, output: str,
                  xlabel: str | None = None, ylabel: str | None = None) -> None:
    if "wigner" not in table.kind_hints:
        raise IncompatibleKind("wigner needs a (q, p, w) grid dataset")
    qs, ps, grid = _pivot_grid(table, "q", "p", "w")
    fig, ax = plt.subplots(figsize=(5.2, 4.6))
    mesh = ax.contourf(qs, ps, grid.T, levels=60, cmap="magma")
    fig.colorbar(mesh, ax=ax, label="W(q, p)")
    # coherent-state reference: circle of radius sqrt(1/2)
    t = np.linspace(0.0, 2.0 * math.pi, 256)
    ax.plot(ZPF_RADIUS * np.cos(t), ZPF_RADIUS * np.sin(t), "k-", linewidth=1.2)
    v2 = _cov_from_metadata(table)
    if v2 is None:
        v2 = _cov_from_grid(qs, ps, grid)
    pts = _ellipse_points(v2)
    ax.plot(pts[0], pts[1], "w--", linewidth=1.2)
    ax.set_aspect("equal")
    ax.set_xlabel(xlabel or "q")
    ax.set_ylabel(ylabel or "p")
    fig.savefig(output, bbox_inches="tight")
    plt.close(fig)


def _cov_from_metadata(table: ParsedTable) -> np.ndarray | None:
    try:
        var_q = float(table.cfg["var_q"])
        var_p = float(table.cfg["var_p"])
        cov_qp = float(table.cfg.get("cov_qp", "0"))
    except (KeyError, ValueError):
        return None
    return np.array([[var_q, cov_qp], [cov_qp, var_p]])


def _cov_from_grid(qs: np.ndarray, ps: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Second moments integrated from the sampled Wigner function."""
    w = np.maximum(grid, 0.0)
    norm = np.trapezoid(np.trapezoid(w, ps, axis=1), qs)
    q = qs[:, None]
    p = ps[None, :]
    var_q = np.trapezoid(np.trapezoid(w * q**2, ps, axis=1), qs) / norm
    var_p = np.trapezoid(np.trapezoid(w * p**2, ps, axis=1), qs) / norm
    cov = np.trapezoid(np.trapezoid(w * q * p, ps, axis=1), qs) / norm
    return np.array([[var_q, cov], [cov, var_p]])
