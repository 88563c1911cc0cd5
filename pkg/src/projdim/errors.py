"""Exception hierarchy.

Validation errors (bad inputs, bad config) and numerical errors (a
computation that cannot proceed) are kept apart so the CLI can map them
to distinct exit codes.
"""


class ProjdimError(Exception):
    """Base class for all package errors."""


class ValidationError(ProjdimError):
    """Malformed input: config files, shapes, parameter ranges."""


class NumericalError(ProjdimError):
    """A well-formed request that fails numerically."""


# -- validation --------------------------------------------------------------

class BadDet(ValidationError):
    pass


class SOutOfRange(ValidationError):
    pass


class BadSpectrum(ValidationError):
    pass


class UnknownName(ValidationError):
    pass


class EmptyHistogram(ValidationError):
    pass


class NonUnimodular(ValidationError):
    pass


# -- numerical ---------------------------------------------------------------

class SingularMatrix(NumericalError):
    pass


class DegenerateTopSingular(NumericalError):
    """sigma_1 == sigma_2 within tolerance; attracting data is not unique."""


class DegenerateH(NumericalError):
    pass


class KernelHit(NumericalError):
    pass


class AtKernel(NumericalError):
    pass


class ReducibleDirection(NumericalError):
    """g^{-1}V lies in V-perp; the UL factorisation does not exist."""


class BadCircle(NumericalError):
    """Direction V sits on the circle where the chart frame degenerates."""


class EnumerationOverflow(NumericalError):
    """Word-tree or convolution budget exceeded."""


class NoBracket(NumericalError):
    """Pressure has one sign on the probed interval; no root to bisect."""


class NotDecreasing(NumericalError):
    """Pressure estimate failed its monotonicity-in-s sanity check."""


class PingPongFail(NumericalError):
    """Schottky separation certificate could not be established."""


class UnderResolved(NumericalError):
    """Histogram is too shallow for the requested component scales."""
