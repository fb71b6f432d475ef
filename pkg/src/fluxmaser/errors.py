"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Bad run configuration: unknown keys, wrong types, out-of-range values."""


class ConvergenceError(RuntimeError):
    """An eigensolve finished but residuals exceed the accepted bound."""


class StabilityError(ValueError):
    """Requested integrator step violates the explicit stability bound.

    Carries a usable suggestion in ``suggested_dt``.
    """

    def __init__(self, message: str, suggested_dt: float):
        super().__init__(message)
        self.suggested_dt = suggested_dt


class DegenerateGapError(ValueError):
    """A transition-rate denominator sits below the degeneracy floor."""


class AmbiguousSteadyStateError(RuntimeError):
    """Generator nullspace is not one-dimensional enough to trust."""


class InvariantViolation(RuntimeError):
    """A density-matrix invariant (hermiticity, trace, positivity) broke."""


class TruncationWarning(RuntimeWarning):
    """Population has reached the top of the truncated Fock space."""
