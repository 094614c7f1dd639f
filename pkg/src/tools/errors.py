from __future__ import annotations


class ZeroInverseError(ZeroDivisionError):
    """Raised when inverting the zero element of GF(L)."""


class DimensionMismatchError(ValueError):
    pass


class IndexRangeError(ValueError):
    """A message index falls outside [1..m]."""


class ParameterError(ValueError):
    pass


class EnumerationCapError(RuntimeError):
    """The requested enumeration would exceed the configured cap."""

    def __init__(self, needed: int, cap: int):
        super().__init__(f"enumeration needs {needed} steps, cap is {cap}")
        self.needed = needed
        self.cap = cap


class NotDecodableError(ValueError):
    pass


class InconsistentInputError(ValueError):
    pass


class ObservedNotInSpaceError(ValueError):
    pass


class StrategySupportError(ValueError):
    """A strategy puts weight on a pattern outside the space or one that cannot serve the pair."""
