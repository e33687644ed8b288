"""Exception and warning types shared across the package."""


class SingularityError(ValueError):
    """A probe and a nucleus coincide (zero relative vector)."""


class DegenerateInputError(ValueError):
    """Inputs make the requested quantity undefined (e.g. zero variance)."""


class DivergenceError(ValueError):
    """The objective diverges at the requested point (no signal)."""


class BracketError(RuntimeError):
    """Scalar minimization found no interior minimum in the bracket."""


class ResourceLimitError(RuntimeError):
    """Requested dense simulation exceeds the configured dimension cap."""


class NumericError(RuntimeError):
    """A dense linear-algebra step failed its accuracy check."""


class QuadratureAccuracyError(RuntimeError):
    """Adaptive quadrature did not reach the requested accuracy.

    Carries the best available estimate and its error estimate.
    """

    def __init__(self, message, best_estimate, est_error):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.est_error = est_error


class ConfigError(ValueError):
    """Configuration file is invalid; message lists every violation."""


class PerturbativeRegimeWarning(UserWarning):
    """Second-order formulas evaluated outside their validity regime."""
