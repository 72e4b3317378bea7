"""Exception types shared across the package.

Every error raised on purpose derives from MvfracError, so callers can
catch one type at the boundary (the CLI maps them to exit code 2).
"""


class MvfracError(Exception):
    """Base class for all errors raised by mvfrac."""


class DimensionError(MvfracError):
    """Shapes or dimensions of the inputs are inconsistent."""


class DegenerateInputError(MvfracError):
    """A matrix input is singular, non-symmetric or not positive definite."""


class ParameterDomainError(MvfracError):
    """A scalar parameter violates its domain condition (e.g. a gamma pole)."""


class NonConvergenceError(MvfracError):
    """A series diverges or converges too slowly to be trusted."""


class ResourceLimitError(MvfracError):
    """A configured resource ceiling (table size, rejection budget) was hit."""


class MissingTableEntryError(MvfracError):
    """A zonal table lookup asked for a partition outside the table range."""
