"""Exception hierarchy shared by all modules."""


class SpectralAngleError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(SpectralAngleError, ValueError):
    pass


class NotNormal(SpectralAngleError, ValueError):
    pass


class NotAProjection(SpectralAngleError, ValueError):
    pass


class NoConvergence(SpectralAngleError, ArithmeticError):
    pass


class DomainError(SpectralAngleError, ValueError):
    """A function was applied outside its domain."""


class AmbiguousMembership(SpectralAngleError, ValueError):
    """An eigenvalue sits on the boundary of a spectral set within tolerance."""


class InvalidSplit(SpectralAngleError, ValueError):
    pass


class DimensionMismatch(SpectralAngleError, ValueError):
    pass


class SubspacesTooFar(SpectralAngleError, ValueError):
    """The subspaces are not in acute position (``||P - Q|| = 1``)."""


class SingularOperator(SpectralAngleError, ArithmeticError):
    pass


class SpectraOverlap(SpectralAngleError, ValueError):
    pass


class QuadratureUnderresolved(SpectralAngleError, ArithmeticError):
    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap


class InvalidGap(SpectralAngleError, ValueError):
    pass


class InvalidN(SpectralAngleError, ValueError):
    pass


class InvalidP(SpectralAngleError, ValueError):
    pass


class InvalidX(SpectralAngleError, ValueError):
    pass


class NotReducing(SpectralAngleError, ValueError):
    pass


class SeparationViolated(SpectralAngleError, ValueError):
    pass


class NotApplicable(SpectralAngleError):
    """The hypothesis of a statement does not hold; this is not a failure."""
