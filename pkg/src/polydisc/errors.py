"""Exception types shared across the package."""


class PolydiscError(Exception):
    """Base class for all polydisc errors."""


class InvalidConfigError(PolydiscError, ValueError):
    """Input configuration violates a precondition (bad n, non-finite coordinates, ...)."""


class SingularConfigError(PolydiscError, ValueError):
    """Configuration has coincident points where distinctness is required."""


class InfeasibleError(PolydiscError, RuntimeError):
    """A construction or constraint system cannot be satisfied.

    ``worst_pair`` (when set) names the index pair with the largest violation.
    """

    def __init__(self, message, worst_pair=None, violation=None):
        super().__init__(message)
        self.worst_pair = worst_pair
        self.violation = violation


class QuadratureError(PolydiscError, RuntimeError):
    """Numerical quadrature failed its internal convergence check."""
