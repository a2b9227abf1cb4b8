"""Exception hierarchy for the sepdec package."""


class SepdecError(Exception):
    """Base class for all sepdec errors."""


class NotSquareError(SepdecError):
    """Matrix is not square."""


class ShapeMismatchError(SepdecError):
    """Operands have inconsistent shapes."""


class NotHermitianError(SepdecError):
    """Hermiticity defect exceeds the configured tolerance."""


class NotPSDError(SepdecError):
    """An eigenvalue falls below the configured negativity tolerance."""


class ZeroMatrixError(SepdecError):
    """Operation requires a nonzero matrix."""


class NotCommutingFamilyError(SepdecError):
    """Block family is not normal/commuting within tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class ClusterAmbiguityError(SepdecError):
    """An eigenvalue gap straddles the clustering tolerance.

    Raised instead of silently deciding whether two nearby eigenvalues
    belong to the same joint eigenspace.
    """

    def __init__(self, message, gap=None, scale=None):
        super().__init__(message)
        self.gap = gap
        self.scale = scale


class NotBOrthogonalError(SepdecError):
    """Matrix is not B-orthogonal (block family check failed)."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class NotIndependentError(SepdecError):
    """Matrix fails the one-sided independence certificate."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class NotBIndependentError(NotIndependentError):
    """Matrix is not B-independent (filtered block family check failed)."""


class NotAIndependentError(NotIndependentError):
    """Matrix is not A-independent (filtered block family check failed)."""


class InfeasibleRanksError(SepdecError):
    """Requested generator ranks cannot be realized in the given dimensions."""


class ParseError(SepdecError):
    """Input file could not be parsed."""


class VerificationFailedError(SepdecError):
    """A report verification check failed.

    ``check`` names the failing check.
    """

    def __init__(self, message, check=None):
        super().__init__(message)
        self.check = check
