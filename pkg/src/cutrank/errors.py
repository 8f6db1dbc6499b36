"""Exception types shared across the package."""


class CutrankError(Exception):
    """Base class for every error raised by cutrank."""


class DimensionError(CutrankError, ValueError):
    pass


class PreconditionError(CutrankError, ValueError):
    """An operation was called outside its documented domain."""


class UnboundedError(CutrankError):
    pass


class GuardError(CutrankError):
    """A configured size guard would be exceeded.

    ``bottleneck`` names the quantity that blew up so callers can report it.
    """

    def __init__(self, message, bottleneck=None, count=None):
        super().__init__(message)
        self.bottleneck = bottleneck
        self.count = count


class EnumerationOverflow(GuardError):
    pass


class GenerationError(CutrankError):
    pass


class CertificateError(CutrankError):
    pass


class FormatError(CutrankError, ValueError):
    """Malformed input file or JSON payload."""
