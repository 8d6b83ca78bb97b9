"""Exception hierarchy shared by every module in the package."""


class FbmError(Exception):
    """Base class for all package errors."""


class DomainError(FbmError, ValueError):
    """An argument lies outside the region where the quantity is defined."""


class QuadratureError(FbmError, ArithmeticError):
    """Adaptive quadrature exhausted its panel budget before meeting tolerance."""


class FactorizationError(FbmError, ArithmeticError):
    """Cholesky factorization hit a pivot too small to trust."""


class DegenerateWeightsError(FbmError, ValueError):
    """A suffix sum of simplex weights vanished, so the weighted primal is undefined."""


class NonConvergenceError(FbmError, RuntimeError):
    """The solver hit its iteration cap; ``result`` carries the best certificate found."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class UnconvergedInputError(FbmError, ValueError):
    """Structural analysis was handed a solve whose gap exceeds its tolerance."""


class InvariantError(FbmError, AssertionError):
    """A structural property that must hold for a certified minimizer failed."""
