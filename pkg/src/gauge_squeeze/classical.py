"""Classical (mean-field) steady-state layer.

The strongly driven control cavity is eliminated by its closed-form steady
state alpha_2 = -E_2 / (i Delta_2' - kappa_2 / 2), which sets the effective
Brillouin coupling G_a = g_a |alpha_2|.  An optional damped fixed-point
solver produces the remaining mean fields (alpha_1, beta_a, beta_m) from
the drive-side parameters, and with them G_m = g_m alpha_1 and
Lambda = 24 eta Re(beta_m)^2.

Conventions for the fixed point (the source equations leave the classical
mechanical equation implicit, so these are documented choices):

* the radiation-pressure sign follows H ~ -g_m a1+ a1 (b_m + b_m+), so the
  effective optical detuning is Delta_tilde = Delta_1 + 2 g_m Re(beta_m);
* the quartic term contributes the real-amplitude force 2 eta (2 Re beta_m)^3
  to the mechanical steady-state equation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import NoConvergence

__all__ = [
    "ControlModeParams",
    "MeanFieldConfig",
    "MeanFields",
    "control_mode_amplitude",
    "effective_brillouin_coupling",
    "mean_field_fixed_point",
]

_FIRST_FIXED_POINT_NOTE = (
    "first fixed point reached from the configured initial guess; "
    "multistability is not scanned"
)


@dataclass(frozen=True)
class ControlModeParams:
    """Drive-side parameters of the eliminated control cavity."""

    E_2: float            # control drive amplitude
    Delta_2_prime: float  # shifted control detuning (supplied as a c-number)
    kappa_2: float        # control-cavity decay
    g_a: float            # single-photon Brillouin coupling

    def __post_init__(self):
        if not self.kappa_2 > 0:
            raise ValueError(f"kappa_2 must be positive, got {self.kappa_2}")
        if not self.E_2 >= 0:
            raise ValueError(f"E_2 must be non-negative, got {self.E_2}")
        if not self.g_a >= 0:
            raise ValueError(f"g_a must be non-negative, got {self.g_a}")


def control_mode_amplitude(p: ControlModeParams) -> complex:
    """Steady control amplitude alpha_2 = -E_2 / (i Delta_2' - kappa_2 / 2)."""
    return -p.E_2 / (1j * p.Delta_2_prime - p.kappa_2 / 2.0)


def effective_brillouin_coupling(g_a: float, alpha_2: complex) -> float:
    """G_a = g_a |alpha_2| (couplings taken real)."""
    return g_a * abs(alpha_2)


@dataclass(frozen=True)
class MeanFieldConfig:
    """Drive and detuning configuration for the mean-field fixed point."""

    E_1: complex = 0.0    # cavity-1 drive amplitude (complex allowed)
    Delta_1: float = 0.0  # bare cavity-1 detuning
    omega_m: float = 1.0
    kappa: float = 0.02
    gamma_a: float = 0.4
    gamma_m: float = 1e-4
    g_m: float = 1e-4
    eta: float = 0.0
    J_m: float = 0.0
    theta: float = 0.0
    Delta_a: float = 3.5
    control: ControlModeParams | None = None
    damping: float = 0.1  # fixed-point damping factor, 0 < damping <= 1
    tol: float = 1e-12    # successive-iterate convergence distance
    max_iter: int = 10_000

    def __post_init__(self):
        if not 0 < self.damping <= 1:
            raise ValueError(f"damping must be in (0, 1], got {self.damping}")
        for name in ("kappa", "gamma_a", "gamma_m", "omega_m"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class MeanFields:
    """Converged mean fields and the effective couplings they imply."""

    alpha_1: complex
    alpha_2: complex
    beta_m: complex
    beta_a: complex
    G_m: complex          # g_m * alpha_1
    G_a: float            # g_a * |alpha_2|
    Lambda: float         # 24 * eta * Re(beta_m)^2
    Delta_tilde: float    # Delta_1 + 2 g_m Re(beta_m)
    iterations: int
    residual: float
    note: str = _FIRST_FIXED_POINT_NOTE


def _steady_rhs(cfg: MeanFieldConfig, G_a: float, fields):
    """One application of the steady-state update map."""
    alpha_1, beta_a, beta_m = fields
    delta_tilde = cfg.Delta_1 + 2.0 * cfg.g_m * beta_m.real
    duffing = 2.0 * cfg.eta * (2.0 * beta_m.real) ** 3
    new_alpha_1 = (cfg.E_1 + 1j * G_a * beta_a) / (cfg.kappa / 2.0 - 1j * delta_tilde)
    new_beta_a = (1j * G_a * alpha_1 - 1j * cfg.J_m * cmath.exp(1j * cfg.theta) * beta_m) / (
        1j * cfg.Delta_a + cfg.gamma_a / 2.0
    )
    new_beta_m = (
        1j * cfg.g_m * abs(alpha_1) ** 2
        - 1j * duffing
        - 1j * cfg.J_m * cmath.exp(-1j * cfg.theta) * beta_a
    ) / (1j * cfg.omega_m + cfg.gamma_m / 2.0)
    return new_alpha_1, new_beta_a, new_beta_m


def _steady_residual(cfg: MeanFieldConfig, G_a: float, fields) -> float:
    """Largest absolute residual of the three steady-state equations."""
    alpha_1, beta_a, beta_m = fields
    delta_tilde = cfg.Delta_1 + 2.0 * cfg.g_m * beta_m.real
    duffing = 2.0 * cfg.eta * (2.0 * beta_m.real) ** 3
    res_a1 = (1j * delta_tilde - cfg.kappa / 2.0) * alpha_1 + cfg.E_1 + 1j * G_a * beta_a
    res_ba = (
        -(1j * cfg.Delta_a + cfg.gamma_a / 2.0) * beta_a
        - 1j * cfg.J_m * cmath.exp(1j * cfg.theta) * beta_m
        + 1j * G_a * alpha_1
    )
    res_bm = (
        -(1j * cfg.omega_m + cfg.gamma_m / 2.0) * beta_m
        + 1j * cfg.g_m * abs(alpha_1) ** 2
        - 1j * duffing
        - 1j * cfg.J_m * cmath.exp(-1j * cfg.theta) * beta_a
    )
    return max(abs(res_a1), abs(res_ba), abs(res_bm))


def mean_field_fixed_point(cfg: MeanFieldConfig) -> MeanFields:
    """Damped fixed-point iteration on the classical steady-state equations.

    Iterates until the successive-iterate distance drops below ``cfg.tol``
    relative to the largest field magnitude (mean fields reach ~1e3, so an
    absolute 1e-12 distance would sit below the double-precision jitter
    floor of the cubic term) and the substituted equation residual drops
    below 1e-10, or raises NoConvergence carrying the last residual.  Only
    the fixed point reached from the zero initial guess is reported; see the
    note field.
    """
    if cfg.control is not None:
        alpha_2 = control_mode_amplitude(cfg.control)
        G_a = effective_brillouin_coupling(cfg.control.g_a, alpha_2)
    else:
        alpha_2 = 0.0 + 0.0j
        G_a = 0.0
    fields = (0.0 + 0.0j, 0.0 + 0.0j, 0.0 + 0.0j)
    lam = cfg.damping
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        updated = _steady_rhs(cfg, G_a, fields)
        step = max(abs(u - f) for u, f in zip(updated, fields))
        fields = tuple((1.0 - lam) * f + lam * u for f, u in zip(fields, updated))
        scale = max(1.0, max(abs(f) for f in fields))
        if step < cfg.tol * scale and _steady_residual(cfg, G_a, fields) < 1e-10:
            break
    else:
        raise NoConvergence(
            f"no fixed point after {cfg.max_iter} iterations "
            f"(damping {lam}, last residual {_steady_residual(cfg, G_a, fields):.3e})",
            residual=_steady_residual(cfg, G_a, fields),
        )
    alpha_1, beta_a, beta_m = fields
    return MeanFields(
        alpha_1=alpha_1,
        alpha_2=alpha_2,
        beta_m=beta_m,
        beta_a=beta_a,
        G_m=cfg.g_m * alpha_1,
        G_a=G_a,
        Lambda=24.0 * cfg.eta * beta_m.real**2,
        Delta_tilde=cfg.Delta_1 + 2.0 * cfg.g_m * beta_m.real,
        iterations=iterations,
        residual=_steady_residual(cfg, G_a, fields),
    )
