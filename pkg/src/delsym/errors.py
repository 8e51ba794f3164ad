class InputError(ValueError):
    """Raised when an argument is outside the documented domain of an operation."""


class UnsupportedCompositionError(InputError):
    """Raised when two group elements have no representable composition."""
