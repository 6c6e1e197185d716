"""Exception hierarchy shared by the library and the CLI."""


class SpectraError(Exception):
    """Base class for all library errors."""


class ValidationError(SpectraError, ValueError):
    """Malformed input: bad digits, bad word syntax, empty language..."""


class InvalidWordError(ValidationError):
    pass


class NotIrrationalError(ValidationError):
    pass


class EmptyLanguageError(ValidationError):
    pass


class UndefinedThicknessError(ValidationError):
    pass


class ResourceError(SpectraError, RuntimeError):
    """A configured budget (intervals, pairs, states) would be exceeded."""
