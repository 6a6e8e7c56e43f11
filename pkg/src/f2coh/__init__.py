"""Degree-truncated calculus for finitely presented graded F2 algebras.

The package is organized in layers.  `gf2` holds packed-bit linear
algebra, `algebra` the monomial and polynomial types, `rings` the
truncated quotient rings with their ideal and nilradical calculus,
`steenrod` the square operations and derivation cohomology, `spectral`
the transgression and tower drivers, and `ringfile`/`suite`/`cli` the
definition-file front end.  The names re-exported here are the stable
surface; everything else may change between releases.
"""
from __future__ import annotations

from .algebra import (GeneratorTable, Monomial, Polynomial, monomial_basis,
                      parse_polynomial)
from .errors import (DefinitionFileError, DegenerateInputError, DescentError,
                     DifferentialError, DimensionMismatchError, F2CohError,
                     HomogeneityError, NZDViolationError, ParseError,
                     TableMismatchError, TruncationError)
from .report import CheckResult, Report
from .ringfile import (Definition, load_bundled, load_definition,
                       parse_definition)
from .rings import (DegreeSlice, NilpotencyResult, NzdResult, QuotientRing,
                    RingMorphism, RingPresentation, ideal_slice_in_quotient,
                    is_nonzerodivisor, morphism_check, morphism_rank,
                    nilpotency_order, nilradical_slice)
from .series import HilbertSeries, RationalForm, series_equal
from .spectral import (BocksteinPage, NilpotenceEntry, SerreState,
                       bockstein_collapses, bockstein_pages,
                       einfty_nilpotence_report, page_series,
                       run_transgression_script, serre_step, serre_total)
from .steenrod import (Derivation, QCohomology, SteenrodSpec, derive,
                       composite_square_check, milnor_q, q_cohomology, sq)
from .suite import run_suite

__version__ = "0.1.0"

__all__ = [
    "BocksteinPage", "CheckResult", "Definition", "DefinitionFileError",
    "DegenerateInputError", "DegreeSlice", "Derivation", "DescentError",
    "DifferentialError", "DimensionMismatchError", "F2CohError",
    "GeneratorTable", "HilbertSeries", "HomogeneityError", "Monomial",
    "NZDViolationError", "NilpotenceEntry", "NilpotencyResult", "NzdResult",
    "ParseError", "Polynomial", "QCohomology", "QuotientRing", "RationalForm",
    "Report", "RingMorphism", "RingPresentation", "SerreState",
    "SteenrodSpec", "TableMismatchError", "TruncationError",
    "bockstein_collapses", "bockstein_pages", "derive",
    "einfty_nilpotence_report", "ideal_slice_in_quotient",
    "is_nonzerodivisor", "composite_square_check", "load_bundled",
    "load_definition", "milnor_q", "monomial_basis", "morphism_check",
    "morphism_rank", "nilpotency_order", "nilradical_slice", "page_series",
    "parse_definition", "parse_polynomial", "q_cohomology", "run_suite",
    "run_transgression_script", "serre_step", "serre_total", "series_equal",
    "sq",
]
