"""Mechanical squeezing in a gauge-phase Brillouin optomechanical loop.

Linearized Gaussian toolbox for a three-mode system: effective model
construction, Lyapunov steady states, stability analysis, covariance
dynamics, lab-frame squeezing observables, mean-field layer, and a sweep
harness with a CLI.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    GaugeSqueezeError,
    MethodDisagreement,
    NoConvergence,
    NonFiniteState,
    NoStablePoints,
    SingularCovariance,
    SingularSolve,
    StepTooLarge,
    Unphysical,
    UnstableSystem,
)
from .model import (
    ACOUSTIC_RESONANCE,
    BASELINE_BETA_M_RE,
    RED_SIDEBAND,
    DiffusionMatrix,
    DriftMatrix,
    EffectiveModel,
    SystemParams,
    baseline_params,
    build_diffusion,
    build_drift,
    build_system,
    diffusion_from_noise_correlations,
    effective_model,
    squeezing_parameter,
)
from .dynamics import (
    CovarianceMatrix,
    CovarianceTrajectory,
    StabilityReport,
    characteristic_polynomial,
    default_initial_covariance,
    evolve_covariance,
    lyapunov_residual,
    routh_hurwitz_verdict,
    solve_lyapunov,
    stability_report,
)
from .observables import (
    DB_LIMIT_3,
    ZPF_VARIANCE,
    MechanicalState,
    WignerGrid,
    effective_phonon_number,
    lab_frame_block,
    mechanical_state,
    momentum_variance,
    position_variance,
    variance_db,
    wigner_grid,
)
from .classical import (
    ControlModeParams,
    MeanFieldConfig,
    MeanFields,
    control_mode_amplitude,
    effective_brillouin_coupling,
    mean_field_fixed_point,
)
from .sweep import (
    OBSERVABLE_COLUMNS,
    DynamicsConfig,
    DynamicsResult,
    SweepAxis,
    SweepDataset,
    SweepRecord,
    SweepSpec,
    evaluate_point,
    find_optimum,
    run_dynamics_experiment,
    run_sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
