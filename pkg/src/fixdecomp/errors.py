"""Exception types raised across the package.

Non-convergence of the sweep solver is deliberately not an exception; it is
reported through the ``converged`` flag on the diagnostics.
"""


class FixdecompError(Exception):
    """Base class for all package-specific errors."""


class ShapeMismatchError(FixdecompError, ValueError):
    """Operands do not share the grid shape the operation requires."""


class FamilySizeMismatchError(ShapeMismatchError):
    """A filter bank and a grid family disagree on the number of members."""


class DegenerateShapeError(FixdecompError, ValueError):
    """A grid dimension is below the smallest meaningful size."""


class RealCastError(FixdecompError, ValueError):
    """A spectrum expected to be Hermitian produced a non-real signal."""


class NonPositiveThresholdError(FixdecompError, ValueError):
    """Shrinkage threshold must be strictly positive."""


class InvalidParameterError(FixdecompError, ValueError):
    """A model parameter is outside its admissible range."""


class InvalidMaskError(InvalidParameterError):
    """A spectral mask must have strictly positive real entries."""


class OverflowGuardError(InvalidParameterError):
    """A spectral weight would overflow double precision."""


class NotWeaklyFactoringError(FixdecompError, ValueError):
    """No diagonal family of nonnegative real symbols links the two banks."""

    def __init__(self, message, member=None, bin_index=None):
        super().__init__(message)
        self.member = member
        self.bin_index = bin_index


class NotStronglyFactoringError(FixdecompError, ValueError):
    """The per-member factors do not collapse to a single symbol."""

    def __init__(self, message, bin_index=None):
        super().__init__(message)
        self.bin_index = bin_index


class CPCViolationError(FixdecompError, ArithmeticError):
    """The composed spectrum is not a contraction where one is required."""


class SingularRefinementError(FixdecompError, ArithmeticError):
    """Refinement quotient denominator vanishes where the numerator does not."""


class NonPositiveCorrectionError(FixdecompError, ArithmeticError):
    """Normalization denominator lost positivity; cannot take an inverse root."""


class EmptyBracketError(FixdecompError, ValueError):
    """A search bracket is empty or inverted."""


class UnsupportedFormatError(FixdecompError, ValueError):
    """The file is not in a format this package reads or writes."""


class CorruptHeaderError(UnsupportedFormatError):
    """A container header is malformed or internally inconsistent."""
