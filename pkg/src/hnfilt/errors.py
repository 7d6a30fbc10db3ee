"""Error taxonomy shared by the engine, the instances and the CLI."""


class HNError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(HNError, ValueError):
    """Malformed object, morphism or file; an invariant of the input fails."""


class ZeroObject(InvalidInput):
    """An HN operation was asked about the zero object."""


class EnumerationBound(HNError):
    """Exhaustive enumeration would exceed the configured bound."""


class PrecisionExhausted(HNError):
    """A power-series search could not decide at the working precision."""


class AxiomViolation(HNError):
    """An instance broke one of the slope-category axioms."""
