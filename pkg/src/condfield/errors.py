"""Exception hierarchy shared by all condfield modules."""


class CondfieldError(Exception):
    """Base class for all errors raised by this package."""


class NonpositiveLength(CondfieldError):
    """Domain right endpoint is not strictly greater than the left one."""


class TooFewPoints(CondfieldError):
    """Grid needs at least two points."""


class LengthMismatch(CondfieldError):
    """Vector length does not match the grid it is used with."""


class EmptyVector(CondfieldError):
    """Operation requires a nonempty vector."""


class InvalidKernelParams(CondfieldError):
    """Covariance kernel parameters violate their constraints."""


class NotPositive(CondfieldError):
    """Assembled operator has a genuinely negative eigenvalue."""


class OutOfDomain(CondfieldError):
    """Evaluation point lies outside the grid's interval."""


class StencilOutOfRange(CondfieldError):
    """Finite-difference stencil does not fit inside the grid."""


class UnsupportedOrder(CondfieldError):
    """Requested finite-difference accuracy order is not available."""


class GridMismatch(CondfieldError):
    """Objects were built on different grids."""


class DegenerateFunctional(CondfieldError):
    """Functional has (numerically) zero variance under the covariance."""


class NegativeU(CondfieldError):
    """Conditioning threshold must be nonnegative."""


class ZeroVector(CondfieldError):
    """Normalization of a zero vector was requested."""


class EmptyUList(CondfieldError):
    """Sweep requires at least one threshold value."""


class ConfigError(CondfieldError):
    """Command-line or config-file value could not be interpreted."""
