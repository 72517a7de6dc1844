"""Exception types shared across the package."""


class SilError(Exception):
    """Base class for all package errors."""


class InvalidSampleSize(SilError):
    pass


class NonSummableTarget(SilError):
    """Target coefficients whose evaluation-norm series diverges."""


class TruncationTooCoarse(SilError):
    """Spectral truncation leaves a non-negligible analytic tail."""


class SingularSystem(SilError):
    """Ridgeless system inconsistent after eigenvalue cutoff."""


class RankDeficient(SilError):
    """Interpolation constraints are inconsistent / rank deficient."""


class NotTraceClass(SilError):
    """Tail trace requested for a divergent spectral series."""


class HypothesisViolated(SilError):
    """A rate prediction was requested outside its hypotheses."""

    def __init__(self, inequality, message=""):
        self.inequality = inequality
        super().__init__(message or f"hypothesis violated: {inequality}")


class NonPositiveData(SilError):
    """Log-log fit received non-positive data."""
