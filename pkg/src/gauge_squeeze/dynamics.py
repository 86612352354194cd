"""Steady-state and dynamical solvers for the quadrature covariance.

The covariance V of the 6 quadratures obeys dV/dt = M V + V M^T + D; its
steady state solves the continuous Lyapunov equation M V + V M^T = -D.
The Lyapunov solve vectorizes to a 36x36 linear system handled by dense LU
with partial pivoting.  Stability is decided twice, from the eigenvalues of
M and from the Routh-Hurwitz table of its characteristic polynomial, and
the two verdicts are cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    MethodDisagreement,
    NonFiniteState,
    SingularSolve,
    StepTooLarge,
    UnstableSystem,
)
from .model import DiffusionMatrix, DriftMatrix

__all__ = [
    "CovarianceMatrix",
    "StabilityReport",
    "CovarianceTrajectory",
    "characteristic_polynomial",
    "routh_hurwitz_verdict",
    "stability_report",
    "solve_lyapunov",
    "lyapunov_residual",
    "evolve_covariance",
    "default_initial_covariance",
]

#: Spectral abscissa above -STABILITY_TOL counts as not stable.
STABILITY_TOL = 1e-10
#: Band around zero abscissa where the two stability methods may disagree.
BORDERLINE_TOL = 1e-8


def _as_matrix(obj, attr: str) -> np.ndarray:
    if hasattr(obj, attr):
        obj = getattr(obj, attr)
    arr = np.asarray(obj, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetric positive-semidefinite quadrature covariance (squeezed frame)."""

    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"covariance must be square, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("covariance entries must be finite")
        if np.max(np.abs(v - v.T), initial=0.0) > 1e-12:
            raise ValueError("covariance must be symmetric to 1e-12 absolute")
        if np.any(np.diag(v) < -1e-12):
            raise ValueError("covariance diagonal must be non-negative")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.v).min())


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of the dual stability test on a drift matrix."""

    stable: bool
    spectral_abscissa: float  # max real part of the eigenvalues of M
    method: str               # "eigenvalue", cross-checked by Routh-Hurwitz
    borderline: bool          # |abscissa| within the borderline band
    routh_hurwitz_stable: bool | None  # None when the table is degenerate


@dataclass(frozen=True)
class CovarianceTrajectory:
    """Sampled covariance evolution; times strictly increasing."""

    times: np.ndarray
    values: tuple[CovarianceMatrix, ...]

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if times.ndim != 1 or len(times) != len(self.values):
            raise ValueError("times and values must have matching lengths")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        times = times.copy()
        times.setflags(write=False)
        object.__setattr__(self, "times", times)

    @property
    def final(self) -> CovarianceMatrix:
        return self.values[-1]


def characteristic_polynomial(M) -> np.ndarray:
    """Coefficients of det(s I - M), highest degree first, leading 1.

    Faddeev-LeVerrier trace recursion; independent of any eigenvalue
    factorization so it can cross-check the eigenvalue stability verdict.
    """
    m = _as_matrix(M, "m")
    n = m.shape[0]
    coeffs = np.empty(n + 1)
    coeffs[0] = 1.0
    work = np.zeros_like(m)
    eye = np.eye(n)
    for k in range(1, n + 1):
        work = m @ (work + coeffs[k - 1] * eye)
        coeffs[k] = -np.trace(work) / k
    return coeffs


def routh_hurwitz_verdict(coeffs: np.ndarray) -> bool | None:
    """Routh-Hurwitz stability verdict for a real polynomial.

    Returns True when all roots have negative real parts, False when at
    least one does not, and None when a first-column entry (or a whole row)
    is too close to zero for a trustworthy sign, which happens only near the
    imaginary axis.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs[0] == 0:
        raise ValueError("leading coefficient must be nonzero")
    coeffs = coeffs / coeffs[0]
    n = len(coeffs) - 1
    if n == 0:
        return True
    width = (n + 2) // 2
    table = np.zeros((n + 1, width + 1))
    table[0, : len(coeffs[0::2])] = coeffs[0::2]
    table[1, : len(coeffs[1::2])] = coeffs[1::2]
    scale = np.max(np.abs(coeffs))
    tiny = 1e-13 * scale
    for i in range(2, n + 1):
        pivot = table[i - 1, 0]
        if abs(pivot) <= tiny:
            return None  # zero (or near-zero) pivot: imaginary-axis roots
        for j in range(width):
            table[i, j] = (
                pivot * table[i - 2, j + 1] - table[i - 2, 0] * table[i - 1, j + 1]
            ) / pivot
        row_scale = np.max(np.abs(table[i]))
        if row_scale > 0:
            tiny = max(tiny, 1e-13 * row_scale)
    first_column = table[: n + 1, 0]
    if np.min(np.abs(first_column)) <= tiny:
        return None
    return bool(np.all(first_column > 0))


def stability_report(
    M,
    tol_stab: float = STABILITY_TOL,
    borderline_tol: float = BORDERLINE_TOL,
) -> StabilityReport:
    """Dual stability test: eigenvalue abscissa plus Routh-Hurwitz table.

    Raises MethodDisagreement when the two verdicts differ while the
    spectral abscissa lies outside the borderline band.
    """
    m = _as_matrix(M, "m")
    if not np.all(np.isfinite(m)):
        raise ValueError("drift matrix must be finite")
    abscissa = float(np.linalg.eigvals(m).real.max())
    stable = abscissa < -tol_stab
    borderline = abs(abscissa) <= borderline_tol
    # Scale to spectral radius ~1 before forming the characteristic
    # polynomial: the Routh table divides by its own entries and a balanced
    # coefficient range keeps those pivots well away from rounding noise.
    scale = max(np.max(np.abs(m)), 1e-300)
    rh = routh_hurwitz_verdict(characteristic_polynomial(m / scale))
    if not borderline and rh is not None and rh != stable:
        raise MethodDisagreement(
            f"eigenvalue verdict stable={stable} (abscissa {abscissa:.3e}) but "
            f"Routh-Hurwitz says stable={rh}"
        )
    return StabilityReport(
        stable=stable,
        spectral_abscissa=abscissa,
        method="borderline" if borderline else "eigenvalue",
        borderline=borderline,
        routh_hurwitz_stable=rh,
    )


def _lyapunov_operator(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    eye = np.eye(n)
    return np.kron(eye, m) + np.kron(m, eye)


def lyapunov_residual(M, D, V) -> float:
    """Relative residual ||M V + V M^T + D||_F / ||D||_F."""
    m = _as_matrix(M, "m")
    d = _as_matrix(D, "d")
    v = _as_matrix(V, "v")
    return float(np.linalg.norm(m @ v + v @ m.T + d) / np.linalg.norm(d))


def solve_lyapunov(
    M,
    D,
    check_stability: bool = True,
    tol_stab: float = STABILITY_TOL,
) -> CovarianceMatrix:
    """Steady-state covariance from M V + V M^T = -D.

    Vectorizes to (I (x) M + M (x) I) vec(V) = -vec(D), solved by dense LU
    with partial pivoting, with one residual-driven refinement pass.  The
    result is symmetrized before return.
    """
    m = _as_matrix(M, "m")
    d = _as_matrix(D, "d")
    if check_stability:
        report = stability_report(m, tol_stab=tol_stab)
        if not report.stable:
            raise UnstableSystem(
                f"spectral abscissa {report.spectral_abscissa:.6e} >= -{tol_stab}"
            )
    op = _lyapunov_operator(m)
    try:
        vec = np.linalg.solve(op, -d.reshape(-1, order="F"))
        v = vec.reshape(m.shape, order="F")
        resid = m @ v + v @ m.T + d
        d_norm = np.linalg.norm(d)
        if np.linalg.norm(resid) > 0.5e-10 * d_norm:
            vec = np.linalg.solve(op, -resid.reshape(-1, order="F"))
            v = v + vec.reshape(m.shape, order="F")
    except np.linalg.LinAlgError as exc:
        raise SingularSolve(f"vectorized Lyapunov system is singular: {exc}") from exc
    if not np.all(np.isfinite(v)):
        raise SingularSolve("vectorized Lyapunov solve produced non-finite entries")
    return CovarianceMatrix(0.5 * (v + v.T))


def default_initial_covariance(n_th: float, r: float) -> np.ndarray:
    """Squeezed-frame covariance of (optical, acoustic) vacuum and a lab-frame
    thermal mechanical state: diag(1/2, 1/2, 1/2, 1/2, (n_th+1/2) e^{2r},
    (n_th+1/2) e^{-2r})."""
    occ = n_th + 0.5
    return np.diag([0.5, 0.5, 0.5, 0.5, occ * np.exp(2 * r), occ * np.exp(-2 * r)])


def _rk4_affine_map(L: np.ndarray, c: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """One classical RK4 step of v' = L v + c as the affine map v -> R v + s."""
    eye = np.eye(L.shape[0])
    hL = h * L
    hL2 = hL @ hL
    hL3 = hL2 @ hL
    R = eye + hL + hL2 / 2.0 + hL3 / 6.0 + (hL3 @ hL) / 24.0
    s = h * ((eye + hL / 2.0 + hL2 / 6.0 + hL3 / 24.0) @ c)
    return R, s


def _compose_map(R: np.ndarray, s: np.ndarray, steps: int) -> tuple[np.ndarray, np.ndarray]:
    """(R, s) applied `steps` times, by binary composition.

    Overflow is tolerated here; callers check finiteness and report
    StepTooLarge / NonFiniteState.
    """
    acc_R = np.eye(R.shape[0])
    acc_s = np.zeros_like(s)
    base_R, base_s = R, s
    k = steps
    with np.errstate(over="ignore", invalid="ignore"):
        while k:
            if k & 1:
                acc_s = base_R @ acc_s + base_s
                acc_R = base_R @ acc_R
            k >>= 1
            if k:
                base_s = base_R @ base_s + base_s
                base_R = base_R @ base_R
    return acc_R, acc_s


def _rk4_reference_step(m: np.ndarray, d: np.ndarray, v: np.ndarray, h: float) -> np.ndarray:
    """Literal RK4 step on dV/dt = M V + V M^T + D (cross-check for the map form)."""

    def f(x):
        return m @ x + x @ m.T + d

    k1 = f(v)
    k2 = f(v + 0.5 * h * k1)
    k3 = f(v + 0.5 * h * k2)
    k4 = f(v + h * k3)
    return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _final_vec(R: np.ndarray, s: np.ndarray, v0: np.ndarray, steps: int) -> np.ndarray:
    acc_R, acc_s = _compose_map(R, s, steps)
    return acc_R @ v0 + acc_s


def evolve_covariance(
    M,
    D,
    V0,
    t_end: float,
    dt: float = 0.01,
    n_samples: int = 200,
    validate_step: bool = True,
    step_tol: float = 1e-4,
) -> CovarianceTrajectory:
    """Integrate dV/dt = M V + V M^T + D with fixed-step classical RK4.

    The equation is linear, so one RK4 step is the affine map
    vec(V) -> R vec(V) + s with R, s formed once from M, D and dt; long
    horizons then compose that exact per-step map by binary exponentiation
    instead of looping (identical update rule, floating-point reassociation
    aside).  Each stored covariance is symmetrized.  A step-halving check
    (same scheme at dt/2) guards against too-large steps.
    """
    m = _as_matrix(M, "m")
    d = _as_matrix(D, "d")
    v0 = np.asarray(_as_matrix(V0, "v"), dtype=float)
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_end <= 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    n_steps = max(1, int(round(t_end / dt)))
    L = _lyapunov_operator(m)
    c = d.reshape(-1, order="F")
    vec0 = v0.reshape(-1, order="F")
    R, s = _rk4_affine_map(L, c, dt)

    final_full = _final_vec(R, s, vec0, n_steps)
    if validate_step:
        R2, s2 = _rk4_affine_map(L, c, dt / 2.0)
        final_half = _final_vec(R2, s2, vec0, 2 * n_steps)
        if not np.all(np.isfinite(final_half)):
            raise NonFiniteState("covariance became non-finite even at half step")
        if not np.all(np.isfinite(final_full)):
            raise StepTooLarge(f"dt={dt} diverges; halving the step stays finite")
        denom = max(np.linalg.norm(final_half), 1e-300)
        discrepancy = np.linalg.norm(final_full - final_half) / denom
        if discrepancy > step_tol:
            raise StepTooLarge(
                f"step-halving discrepancy {discrepancy:.3e} exceeds {step_tol:.1e} at dt={dt}"
            )
    elif not np.all(np.isfinite(final_full)):
        raise NonFiniteState("covariance became non-finite during integration")

    n_samples = max(1, min(int(n_samples), n_steps))
    sample_steps = np.unique(
        np.round(np.linspace(0, n_steps, n_samples + 1))[1:].astype(int)
    )
    times = [0.0]
    values = [CovarianceMatrix(0.5 * (v0 + v0.T))]
    vec = vec0
    prev_step = 0
    stride_maps: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for step in sample_steps:
        stride = int(step - prev_step)
        if stride not in stride_maps:
            stride_maps[stride] = _compose_map(R, s, stride)
        acc_R, acc_s = stride_maps[stride]
        vec = acc_R @ vec + acc_s
        prev_step = step
        v = vec.reshape(m.shape, order="F")
        if not np.all(np.isfinite(v)):
            raise NonFiniteState(f"covariance became non-finite at t={step * dt}")
        times.append(step * dt)
        values.append(CovarianceMatrix(0.5 * (v + v.T)))
    return CovarianceTrajectory(np.asarray(times), tuple(values))
