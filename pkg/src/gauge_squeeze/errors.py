"""Exception types shared across the package."""


class GaugeSqueezeError(Exception):
    """Base class for all package-specific failures."""


class UnstableSystem(GaugeSqueezeError):
    """Drift matrix has a non-negative spectral abscissa; no steady state."""


class SingularSolve(GaugeSqueezeError):
    """The vectorized Lyapunov system is numerically singular."""


class MethodDisagreement(GaugeSqueezeError):
    """Eigenvalue and Routh-Hurwitz verdicts differ outside the borderline band."""


class StepTooLarge(GaugeSqueezeError):
    """Step-halving check of the fixed-step integrator exceeded tolerance."""


class NonFiniteState(GaugeSqueezeError):
    """Covariance entries became non-finite during integration."""


class NoConvergence(GaugeSqueezeError):
    """Mean-field fixed-point iteration did not converge."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class NoStablePoints(GaugeSqueezeError):
    """Optimum requested on a dataset with no stable grid points."""


class Unphysical(GaugeSqueezeError):
    """An observable violated a physical bound beyond numerical tolerance."""


class SingularCovariance(GaugeSqueezeError):
    """Mechanical covariance block is numerically singular."""


class ConfigError(GaugeSqueezeError):
    """Malformed configuration file or override."""
