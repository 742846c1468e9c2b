"""Exception types shared across the package."""


class GeoinvexError(Exception):
    """Base class for all package errors."""


class DomainViolation(GeoinvexError):
    """A coordinate tuple is outside the chart's domain."""


class BasePointMismatch(GeoinvexError):
    """Tangent vectors were combined at different base points."""


class ZeroGradient(GeoinvexError):
    """An operation required a nonzero gradient at the base point."""


class NoRoot(GeoinvexError):
    """The scalar fixed-point equation for a self-referential eta map
    has no root in the searched bracket."""


class UnknownProblem(GeoinvexError):
    """A problem name did not resolve against the built-in registry."""


class SchemaError(GeoinvexError):
    """A configuration document failed validation.

    Carries the offending field path so CLI diagnostics can point at it.
    """

    def __init__(self, message: str, field: str = ""):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)
