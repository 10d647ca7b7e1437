"""Exception and warning types raised by chirpwave.

Every numeric refusal derives from :class:`OpticsError`; the CLI maps those
to exit code 2.
"""


class OpticsError(Exception):
    """Base class for all refusals raised by this package."""


class InvalidArgumentError(OpticsError, ValueError):
    pass


class AliasingError(OpticsError):
    """A sampled chirp or carrier would violate the lattice Nyquist limit."""


class CoverageError(OpticsError):
    """The grid window is too small for the requested quadrature."""


class MomentRangeError(OpticsError, ArithmeticError):
    """Moment weights would overflow float64."""


class AdmissibilityUndefinedError(OpticsError):
    """The admissibility constant is undefined (pure-chirp wavelet)."""


class SamplingError(OpticsError):
    """A propagation method's validity inequality is violated."""


class GeometryError(OpticsError):
    """An object, disc or lattice does not fit the requested window."""


class CostGuardError(OpticsError):
    """An O(N^4) reference path was asked for a grid that is too large."""


class CoverageWarning(UserWarning):
    pass


class AdmissibilityWarning(UserWarning):
    """Axis-adjacent bins dominate C, or the spectral bump is unresolved."""
