"""Exact rank brackets for split, t-branch split and lattice closures of small 0-1 polytopes."""

from .errors import (
    CertificateError, CutrankError, DimensionError, EnumerationOverflow, FormatError, GenerationError, GuardError,
    PreconditionError, UnboundedError,
)

__version__ = "0.1.0"

__all__ = [
    "CertificateError", "CutrankError", "DimensionError", "EnumerationOverflow", "FormatError",
    "GenerationError", "GuardError", "PreconditionError", "UnboundedError", "__version__",
]
