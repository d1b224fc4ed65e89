"""
Error types raised by the diagonal-copula engine
"""


class DiagonalCopulaError(Exception):
    """Base class for every error raised by the engine"""


class DiagonalValidationError(DiagonalCopulaError):
    """A candidate diagonal or piecewise-linear function was rejected"""


class MalformedPiecewise(DiagonalValidationError):
    """Breakpoints are not a valid piecewise-linear function on [0, 1]"""


class ViolatesBound(DiagonalValidationError):
    """Some breakpoint has delta(x) > x"""


class SlopeOutOfRange(DiagonalValidationError):
    """Some segment slope lies outside [0, 2]"""


class EndpointMismatch(DiagonalValidationError):
    """delta(0) != 0 or delta(1) != 1"""


class OutOfDomain(DiagonalCopulaError):
    """A query point lies outside the unit interval or unit square"""


class NoSlopeOneSegment(DiagonalCopulaError):
    """The diagonal has no segment of slope 1 to perturb"""


class DiagonalMismatch(DiagonalCopulaError):
    """Two evaluators being spliced do not share a diagonal section"""


class EmptyOmega(DiagonalCopulaError):
    """The witness set is empty, which happens only for the identity diagonal"""


class NotSimple(DiagonalCopulaError):
    """The simple-diagonal route was requested for a non-unimodal delta-hat"""


class RouteMismatch(DiagonalCopulaError):
    """Independent computation routes disagree; always an implementation bug"""


class IoFailure(DiagonalCopulaError):
    """Reading or writing an artifact failed"""
