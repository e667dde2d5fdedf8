"""Exception types raised across the package."""


class CtcSimError(Exception):
    """Base class for all package errors."""


class DimensionError(CtcSimError, ValueError):
    """Shapes or subsystem dimensions do not agree."""


class NotHermitianError(CtcSimError, ValueError):
    """A matrix that must be Hermitian is not, within tolerance."""

    def __init__(self, max_deviation, tol):
        self.max_deviation = float(max_deviation)
        self.tol = float(tol)
        super().__init__(
            f"matrix is not Hermitian: max |m - m^dagger| = {self.max_deviation:.3e} "
            f"exceeds tolerance {self.tol:.1e}"
        )


class InvalidStateError(CtcSimError, ValueError):
    """A state, density operator or gate violates its invariants."""


class ParadoxError(CtcSimError):
    """A post-selected history has (numerically) zero weight.

    ``weight`` is the pre-normalisation weight that vanished.
    """

    def __init__(self, weight, eps, context=""):
        self.weight = float(weight)
        self.eps = float(eps)
        self.context = context
        msg = f"inconsistent history: consistency weight {self.weight:.3e} < {self.eps:.1e}"
        if context:
            msg = f"{context}: {msg}"
        super().__init__(msg)


class ConvergenceError(CtcSimError):
    """The fixed-point iteration did not reach tolerance.

    ``solution`` holds the last iterate and its diagnostics.
    """

    def __init__(self, message, solution=None):
        self.solution = solution
        super().__init__(message)
