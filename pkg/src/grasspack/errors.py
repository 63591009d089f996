"""Exception hierarchy shared across the package.

The distinction matters mostly to the CLI, which maps these onto exit
codes: precondition/verification failures (1), usage problems (2) and
capacity guards (3).
"""


class GrasspackError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(GrasspackError, ValueError):
    """A numeric or structural parameter is outside its allowed range."""


class DomainError(GrasspackError, ValueError):
    """Inputs are individually fine but mutually incompatible
    (mismatched groups, wrong shapes, non-Hermitian input, ...)."""


class PreconditionError(GrasspackError, ValueError):
    """A mathematical hypothesis of a construction is not satisfied
    (e.g. the given set is not a difference set)."""


class CapacityError(GrasspackError, RuntimeError):
    """The request exceeds the documented desk-scale limits."""
