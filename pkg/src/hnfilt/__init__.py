"""Harder-Narasimhan filtrations for slope categories, computed exactly."""

from hnfilt.errors import (
    AxiomViolation,
    EnumerationBound,
    HNError,
    InvalidInput,
    PrecisionExhausted,
    ZeroObject,
)

__version__ = "0.1.0"

__all__ = [
    "AxiomViolation",
    "EnumerationBound",
    "HNError",
    "InvalidInput",
    "PrecisionExhausted",
    "ZeroObject",
    "__version__",
]
