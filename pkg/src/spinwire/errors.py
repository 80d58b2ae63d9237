"""Exception hierarchy shared by every spinwire module."""


class SpinwireError(Exception):
    """Base class for all errors raised by spinwire."""


class ParameterError(SpinwireError, ValueError):
    """A parameter violates its documented invariant.

    The message always starts with the offending field name.
    """


class ZeroCoupling(SpinwireError, ValueError):
    """J = D = 0, so omega = conj(Gamma)/Gamma is undefined."""


class NonUniformField(SpinwireError, ValueError):
    """An operation that needs a single field value got a per-site profile."""


class ThetaOutOfRange(SpinwireError, ValueError):
    pass


class ZeroDenominator(SpinwireError, ArithmeticError):
    """The normalization denominator vanishes (theta in {0, +-pi})."""


class ZeroField(SpinwireError, ValueError):
    """The continuum formulas divide by B and B is zero."""


class DimensionMismatch(SpinwireError, ValueError):
    pass


class TooLarge(SpinwireError, ValueError):
    """Full Hilbert-space simulation requested beyond the memory guard."""


class NumericalFailure(SpinwireError, ArithmeticError):
    """Base for failures of a numerical algorithm (CLI exit code 2)."""


class ConvergenceFailure(NumericalFailure):
    """The tridiagonal eigensolver did not converge."""


class QuadratureNonConvergence(NumericalFailure):
    """Node doubling hit the refinement cap without meeting the tolerance."""
