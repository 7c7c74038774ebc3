"""Exception hierarchy shared by all modules."""


class CoregError(Exception):
    """Base class for every error raised by coregkit."""


class InputError(CoregError, ValueError):
    """Malformed or inconsistent input."""


class ParseError(InputError):
    """Germ text or scenario file could not be parsed."""


class TruncationError(CoregError):
    """The answer could depend on terms beyond the truncation order."""


class UndefinedOrderError(CoregError):
    """Order of the zero germ (or of a germ whose terms were all dropped)."""


class NotSingularError(InputError):
    """Germ has a nonzero constant or linear part where a singular germ is required."""


class NonReducedError(InputError):
    """Germ is zero or has a repeated factor through the origin."""


class NonCompleteFanError(InputError):
    """Fan does not cover the ambient space."""


class AmbiguousFaceError(InputError):
    """Face attachment of a dual complex cell cannot be inferred."""
