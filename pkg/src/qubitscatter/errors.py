"""Exception types raised by the numerical routines."""


class ScatterError(Exception):
    """Base class for all errors raised by qubitscatter."""


class DomainError(ScatterError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ResonanceError(ScatterError, ArithmeticError):
    """A resummation denominator vanished: the parameters sit on a scattering pole."""


class SingularSystemError(ResonanceError):
    """The two-site source system could not be solved (singular at a pole)."""


class DegenerateBranchError(ScatterError, ArithmeticError):
    """The square root in the kernel decomposition hit its branch point."""


class ZeroYieldError(ScatterError, ArithmeticError):
    """The post-selected event has vanishing probability, so rho is undefined."""


class UnsupportedRegimeError(ScatterError):
    """The requested evaluation lies outside the regime the closed forms cover."""


class ConvergenceError(ScatterError, RuntimeError):
    """An iterative evaluation (quadrature doubling, series) did not converge.

    The best available estimate and its error indicator are kept on the
    exception so that callers can still inspect them.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
