"""Exception types shared across the package."""


class FraceqError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(FraceqError, ValueError):
    """A distribution or model parameter violates its constraints."""


class PoleError(FraceqError, ValueError):
    """Gamma evaluated at a nonpositive integer."""


class DivergenceError(FraceqError, ArithmeticError):
    """An integral or moment diverges, or its quadrature failed to converge."""


class SingularEvaluationError(FraceqError, ValueError):
    """A power sum with negative exponents was evaluated at zero."""


class OrderViolationError(FraceqError, RuntimeError):
    """The survival bounded order required by an operation does not hold."""

    def __init__(self, message: str, worst_t: float = float("nan"),
                 worst_gap: float = float("nan")):
        super().__init__(message)
        self.worst_t = worst_t
        self.worst_gap = worst_gap


class MissingDensityError(FraceqError, ValueError):
    """An operation needs an absolutely continuous density the model lacks."""
