"""Exception types raised across the package."""


class MakaiError(Exception):
    """Base class for errors raised by this package."""


class DomainError(MakaiError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedExponentError(DomainError):
    """The exponent pair is admissible but not handled (e.g. p = 1)."""


class DimensionError(MakaiError, ValueError):
    """Input points or constraints do not span a full-dimensional body."""


class UnboundedError(MakaiError, ValueError):
    """A halfspace description does not bound a compact body."""


class GeometryError(MakaiError, ValueError):
    """A polygon or mesh is not well formed (self-intersection, bad slit)."""


class PreconditionError(MakaiError, ValueError):
    """A point-wise precondition of an operation is violated."""
