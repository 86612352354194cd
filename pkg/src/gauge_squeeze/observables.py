"""Lab-frame mechanical observables from the squeezed-frame covariance.

The Bogoliubov transform maps lab quadratures onto the squeezed frame as
X_m = e^{-r} X_s and Y_m = e^{+r} Y_s, so the physical (lab) mechanical
block is obtained by the symplectic scaling S = diag(e^{-r}, e^{+r})
applied to the (X_bm, Y_bm) block of the covariance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularCovariance, Unphysical

__all__ = [
    "ZPF_VARIANCE",
    "DB_LIMIT_3",
    "MechanicalState",
    "WignerGrid",
    "lab_frame_block",
    "position_variance",
    "momentum_variance",
    "variance_db",
    "effective_phonon_number",
    "mechanical_state",
    "wigner_grid",
]

#: Zero-point quadrature variance, the dB reference.
ZPF_VARIANCE = 0.5
#: Squeezing value of the parametric 3 dB limit (variance 1/4).
DB_LIMIT_3 = -10.0 * math.log10(0.25 / ZPF_VARIANCE)


def _cov6(V) -> np.ndarray:
    if hasattr(V, "v"):
        V = V.v
    v = np.asarray(V, dtype=float)
    if v.shape[0] < 6 or v.shape[0] != v.shape[1]:
        raise ValueError(f"expected the 6x6 covariance, got shape {v.shape}")
    return v


def lab_frame_block(V, r: float) -> np.ndarray:
    """Lab-frame 2x2 mechanical covariance block S V_mm S, S = diag(e^-r, e^r)."""
    v = _cov6(V)
    block = v[4:6, 4:6]
    scale = np.diag([math.exp(-r), math.exp(r)])
    return scale @ block @ scale


def position_variance(V, r: float) -> float:
    """Lab-frame position variance <dq_m^2> = V_55 e^{-2r} (1-based indices)."""
    return float(_cov6(V)[4, 4] * math.exp(-2.0 * r))


def momentum_variance(V, r: float) -> float:
    """Lab-frame momentum variance <dp_m^2> = V_66 e^{+2r} (1-based indices)."""
    return float(_cov6(V)[5, 5] * math.exp(2.0 * r))


def variance_db(var_q: float) -> float:
    """Squeezing in dB, -10 log10(var / ZPF) with ZPF variance 1/2.

    Positive values mean squeezing below the zero-point level; the 3 dB
    limit corresponds to variance 1/4.
    """
    if not var_q > 0:
        raise ValueError(f"variance must be positive, got {var_q}")
    return -10.0 * math.log10(var_q / ZPF_VARIANCE)


def effective_phonon_number(V, r: float) -> float:
    """Effective mechanical occupancy (V_55 e^{-2r} + V_66 e^{+2r} - 1) / 2.

    Tiny negative values down to -1e-12 are clamped to zero; anything below
    -1e-9 raises Unphysical.
    """
    v = _cov6(V)
    n_eff = 0.5 * (v[4, 4] * math.exp(-2.0 * r) + v[5, 5] * math.exp(2.0 * r) - 1.0)
    if n_eff < -1e-9:
        raise Unphysical(f"effective phonon number {n_eff} < -1e-9")
    if n_eff < 0 and n_eff >= -1e-12:
        return 0.0
    return float(n_eff)


@dataclass(frozen=True)
class MechanicalState:
    """Lab-frame mechanical block with its derived scalar observables."""

    v_lab: np.ndarray
    var_q: float
    var_p: float
    squeeze_db: float
    n_eff: float

    def __post_init__(self):
        v = np.asarray(self.v_lab, dtype=float)
        if v.shape != (2, 2):
            raise ValueError(f"lab-frame block must be 2x2, got {v.shape}")
        if self.var_q * self.var_p < 0.25 * (1.0 - 1e-9):
            raise Unphysical(
                f"uncertainty product {self.var_q * self.var_p} below 1/4"
            )
        if self.n_eff < -1e-12:
            raise Unphysical(f"negative effective phonon number {self.n_eff}")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "v_lab", v)


def mechanical_state(V, r: float) -> MechanicalState:
    """Bundle the lab-frame block and scalar observables for one covariance."""
    v_lab = lab_frame_block(V, r)
    var_q = float(v_lab[0, 0])
    var_p = float(v_lab[1, 1])
    return MechanicalState(
        v_lab=v_lab,
        var_q=var_q,
        var_p=var_p,
        squeeze_db=variance_db(var_q),
        n_eff=effective_phonon_number(V, r),
    )


@dataclass(frozen=True)
class WignerGrid:
    """Gaussian Wigner function sampled on a Cartesian (q, p) grid."""

    q_axis: np.ndarray
    p_axis: np.ndarray
    w: np.ndarray
    normalization_check: float

    def __post_init__(self):
        q = np.asarray(self.q_axis, dtype=float)
        p = np.asarray(self.p_axis, dtype=float)
        w = np.asarray(self.w, dtype=float)
        if w.shape != (len(q), len(p)):
            raise ValueError("w must have shape (len(q_axis), len(p_axis))")
        for arr in (q, p):
            if np.any(np.diff(arr) <= 0):
                raise ValueError("axes must be strictly increasing")
        for name, arr in (("q_axis", q), ("p_axis", p), ("w", w)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def wigner_grid(
    v_lab: np.ndarray,
    q_axis: np.ndarray | None = None,
    p_axis: np.ndarray | None = None,
    points: int = 201,
    extent_sigmas: float = 5.0,
) -> WignerGrid:
    """Evaluate W(q, p) = exp(-u^T V^-1 u / 2) / (2 pi sqrt(det V)) on a grid.

    Default axes span +-extent_sigmas times the larger quadrature standard
    deviation, 201 points per axis.  W(0, 0) = 1 / (2 pi sqrt(det V)).
    """
    v = np.asarray(v_lab, dtype=float)
    if v.shape != (2, 2):
        raise ValueError(f"lab-frame covariance must be 2x2, got {v.shape}")
    det = float(v[0, 0] * v[1, 1] - v[0, 1] * v[1, 0])
    if det <= 1e-300:
        raise SingularCovariance(f"det(v_lab) = {det} is not positive")
    if q_axis is None or p_axis is None:
        extent = extent_sigmas * math.sqrt(max(v[0, 0], v[1, 1]))
        default = np.linspace(-extent, extent, points)
        q_axis = default if q_axis is None else np.asarray(q_axis, dtype=float)
        p_axis = default if p_axis is None else np.asarray(p_axis, dtype=float)
    else:
        q_axis = np.asarray(q_axis, dtype=float)
        p_axis = np.asarray(p_axis, dtype=float)
    q = q_axis[:, None]
    p = p_axis[None, :]
    # inverse of [[a, c], [c, b]] times det: quadratic form expanded directly
    a, b, c = v[0, 0], v[1, 1], v[0, 1]
    quad = (b * q**2 - 2.0 * c * q * p + a * p**2) / det
    w = np.exp(-0.5 * quad) / (2.0 * math.pi * math.sqrt(det))
    norm = float(np.trapezoid(np.trapezoid(w, p_axis, axis=1), q_axis, axis=0))
    return WignerGrid(q_axis=q_axis, p_axis=p_axis, w=w, normalization_check=norm)
