"""Exception types shared across the package."""
from __future__ import annotations


class F2CohError(Exception):
    """Base class for all first-party errors."""


class ParseError(F2CohError):
    """Raised on malformed polynomial expressions; carries the offset."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


class TableMismatchError(F2CohError):
    """Operands belong to different generator tables."""


class HomogeneityError(F2CohError):
    """An operation required a homogeneous polynomial and did not get one."""


class TruncationError(F2CohError):
    """A computation would need degrees beyond the truncation bound."""


class DimensionMismatchError(F2CohError):
    """Bit-vector or matrix shapes do not line up."""


class DegenerateInputError(F2CohError):
    """Input is structurally valid but meaningless for the operation."""


class DescentError(F2CohError):
    """A derivation does not descend to the quotient ring."""


class DifferentialError(F2CohError):
    """A would-be differential failed to square to zero."""


class NZDViolationError(F2CohError):
    """A spectral-sequence step needed a non-zero-divisor and found otherwise.

    Carries the first degree at which injectivity of the multiplication
    map fails.
    """

    def __init__(self, message: str, degree: int) -> None:
        super().__init__(message)
        self.degree = degree


class DefinitionFileError(F2CohError):
    """The ring-definition file is malformed or inconsistent."""
