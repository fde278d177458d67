"""Exception hierarchy shared by all modules."""


class FracSolitonError(Exception):
    """Base class for every error raised by the package."""


class DomainError(FracSolitonError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class SingularityError(DomainError):
    """Evaluation requested at a point where the function blows up."""


class UnsupportedRegimeError(DomainError):
    """The requested operation is not available for these parameters."""


class DataError(FracSolitonError, ValueError):
    """Profile samples are malformed (non-finite, wrong length...)."""


class DegenerateProfileError(FracSolitonError, ValueError):
    """A quotient or normalisation has a vanishing denominator."""


class PreconditionError(FracSolitonError, ValueError):
    """An analysis was called on a profile that violates its preconditions."""


class FitDomainError(FracSolitonError, ValueError):
    """The fit window is unusable (too few points, sign change...)."""


class AccuracyError(FracSolitonError, ArithmeticError):
    """A quadrature could not reach the requested tolerance.

    Attributes
    ----------
    achieved : float
        Best relative error estimate that was reached.
    """

    def __init__(self, message, achieved):
        super().__init__(f"{message} (achieved relative error {achieved:.3g})")
        self.achieved = achieved


class ConvergenceError(FracSolitonError, RuntimeError):
    """Fixed-point iteration stopped at ``max_iter`` without meeting tolerances."""

    def __init__(self, message, report, profile=None):
        super().__init__(message)
        self.report = report
        self.profile = profile


class InstabilityError(FracSolitonError, FloatingPointError):
    """NaN or overflow appeared during an iteration."""
