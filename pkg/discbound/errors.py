"""Exception types raised by discbound."""


class DiscboundError(Exception):
    """Base class for all discbound errors."""


class DomainError(DiscboundError, ValueError):
    """An argument lies outside the domain of an operation."""


class DimensionMismatchError(DiscboundError, ValueError):
    """Two objects that must share a dimension do not."""


class InfeasibleSizeError(DiscboundError):
    """A computation would exceed its configured size cap."""

    def __init__(self, what: str, size: float, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: estimated size {size:.4g} exceeds cap {cap}")


class FileFormatError(DiscboundError, ValueError):
    """An input file could not be parsed."""
