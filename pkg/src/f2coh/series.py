"""Hilbert series as truncated coefficient vectors.

A series may carry an optional rational form, a pair of multisets of
exponents read as products of ``(1 - t^a)`` factors.  Forms are never
manipulated symbolically: every comparison goes through expansion up to
the truncation bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import TruncationError

__all__ = ["RationalForm", "HilbertSeries", "SeriesComparison", "series_equal"]


@dataclass(frozen=True)
class RationalForm:
    """prod(1 - t^a for a in numerator) / prod(1 - t^b for b in denominator)."""

    numerator: tuple[int, ...]
    denominator: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(a < 1 for a in self.numerator + self.denominator):
            raise ValueError("rational form exponents must be >= 1")

    def expand(self, bound: int) -> tuple[int, ...]:
        """Power-series coefficients up to degree ``bound``."""
        coeffs = [0] * (bound + 1)
        coeffs[0] = 1
        for a in self.numerator:
            previous = list(coeffs)
            for d in range(a, bound + 1):
                coeffs[d] = previous[d] - previous[d - a]
        for b in self.denominator:
            for d in range(b, bound + 1):
                coeffs[d] += coeffs[d - b]
        return tuple(coeffs)

    def __str__(self) -> str:
        def side(factors: tuple[int, ...]) -> str:
            return "".join(f"(1-t^{a})" for a in factors) or "1"

        return f"{side(self.numerator)}/{side(self.denominator)}"


@dataclass(frozen=True)
class HilbertSeries:
    """Coefficient vector for degrees 0..truncation, plus optional form.

    When a rational form is attached its expansion must agree with the
    stored coefficients; mismatched pairs cannot be constructed.
    """

    coefficients: tuple[int, ...]
    rational_form: RationalForm | None = None

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise ValueError("a series needs at least the degree-0 coefficient")
        if self.rational_form is not None:
            expected = self.rational_form.expand(self.truncation)
            if expected != self.coefficients:
                first = next(d for d in range(self.truncation + 1)
                             if expected[d] != self.coefficients[d])
                raise ValueError(
                    f"rational form disagrees with coefficients at degree {first}")

    @property
    def truncation(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, d: int) -> int:
        if not 0 <= d <= self.truncation:
            raise TruncationError(f"degree {d} beyond series bound {self.truncation}")
        return self.coefficients[d]

    def with_rational_form(self, form: RationalForm) -> "HilbertSeries":
        return HilbertSeries(self.coefficients, form)


@dataclass(frozen=True)
class SeriesComparison:
    equal: bool
    first_mismatch: int | None
    bound: int

    def __bool__(self) -> bool:
        return self.equal


def _coeffs(s, bound: int) -> tuple[int, ...]:
    if isinstance(s, HilbertSeries):
        if s.truncation < bound:
            raise TruncationError(
                f"series truncated at {s.truncation}, comparison needs {bound}")
        return s.coefficients[:bound + 1]
    if isinstance(s, RationalForm):
        return s.expand(bound)
    seq = tuple(int(c) for c in s)
    if len(seq) < bound + 1:
        raise TruncationError(
            f"coefficient vector of length {len(seq)}, comparison needs {bound + 1}")
    return seq[:bound + 1]


def series_equal(a, b, up_to: int | None = None) -> SeriesComparison:
    """Compare two series by expansion up to ``up_to``.

    Accepts HilbertSeries, RationalForm or plain coefficient sequences.
    The default bound is the largest one both sides support.
    """
    if up_to is None:
        bounds = [s.truncation for s in (a, b) if isinstance(s, HilbertSeries)]
        bounds += [len(s) - 1 for s in (a, b)
                   if not isinstance(s, (HilbertSeries, RationalForm))]
        if not bounds:
            raise ValueError("comparison of two rational forms needs an explicit bound")
        up_to = min(bounds)
    ca = _coeffs(a, up_to)
    cb = _coeffs(b, up_to)
    for d in range(up_to + 1):
        if ca[d] != cb[d]:
            return SeriesComparison(False, d, up_to)
    return SeriesComparison(True, None, up_to)
