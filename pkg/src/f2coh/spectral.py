"""Two desk-scale spectral-sequence drivers.

The first iterates transgressions for a fibration whose fiber
contributes a single polynomial generator: each step divides the base
by the transgression image and doubles the fiber generator's degree.
The step insists on a non-zero-divisor image, certified exactly through
a telescoping dimension count, and fails loudly otherwise; the next
image is supplied by the caller, since deriving it is topology, not
algebra.

The second walks the mod-2 homology Bockstein tower: page 1 is the ring
itself, page 2 is cohomology with respect to the degree-raising
derivation, and collapse is reported when page 2 is concentrated in
even degrees.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import gf2
from .algebra import GeneratorTable, Polynomial, parse_polynomial
from .errors import (DegenerateInputError, HomogeneityError,
                     NZDViolationError, TableMismatchError)
from .rings import QuotientRing, RingPresentation, nilpotency_order
from .series import HilbertSeries
from .steenrod import Derivation, QCohomology, derive, q_cohomology

__all__ = [
    "SerreState",
    "serre_step",
    "run_transgression_script",
    "serre_total",
    "page_series",
    "BocksteinPage",
    "bockstein_pages",
    "NilpotenceEntry",
    "einfty_nilpotence_report",
]

PERMANENT = "permanent"


def _coerce_step(base: QuotientRing, step) -> Polynomial | None:
    """Normalize a script step: None for permanence, else a polynomial."""
    if step is None:
        return None
    if isinstance(step, str):
        if step.strip() == PERMANENT:
            return None
        step = parse_polynomial(step, base.table)
    if not isinstance(step, Polynomial):
        raise TypeError(f"transgression step must be a string or Polynomial, "
                        f"got {type(step).__name__}")
    if step.table != base.table:
        raise TableMismatchError("transgression image is over the wrong table")
    if step.is_zero:
        raise DegenerateInputError(
            "zero transgression: mark the state permanent instead")
    return step


@dataclass(frozen=True)
class SerreState:
    """One page of the transgression iteration.

    ``base`` carries the surviving base-line algebra, the fiber
    generator is u^(2^fiber_power), and ``transgression`` is its image
    under the next differential (None once the generator is permanent).
    """

    base: QuotientRing
    fiber_power: int
    transgression: Polynomial | None

    def __post_init__(self) -> None:
        if self.fiber_power < 0:
            raise ValueError("fiber power must be non-negative")
        v = self.transgression
        if v is not None:
            expected = 2 ** self.fiber_power + 1
            if v.table != self.base.table:
                raise TableMismatchError(
                    "transgression image is over the wrong table")
            if v.is_zero or v.degree != expected:
                raise HomogeneityError(
                    f"transgression on page {self.page} must be homogeneous "
                    f"of degree {expected}")

    @classmethod
    def start(cls, base: QuotientRing, step) -> "SerreState":
        return cls(base, 0, _coerce_step(base, step))

    @property
    def page(self) -> int:
        return 2 ** self.fiber_power + 1

    @property
    def is_permanent(self) -> bool:
        return self.transgression is None

    @property
    def fiber_degree(self) -> int:
        return 2 ** self.fiber_power


def _eliminable_generator(v: Polynomial) -> int | None:
    """Index of a generator v is linear in, or None.

    A generator qualifies when it appears as a bare degree-one term of
    ``v`` and in no other term, so that v = x_j + w rewrites x_j as w.
    When several qualify the last one in table order is chosen, which
    keeps the earlier generators of the presentation alive.
    """
    table = v.table
    candidates = []
    for j in range(len(table)):
        bare = tuple(1 if i == j else 0 for i in range(len(table)))
        seen_bare = False
        clean = True
        for mono in v.terms:
            if mono.exponents == bare:
                seen_bare = True
            elif mono.exponents[j]:
                clean = False
                break
        if seen_bare and clean:
            candidates.append(j)
    return candidates[-1] if candidates else None


def _drop_generator(p: Polynomial, j: int, replacement: Polynomial,
                    new_table: GeneratorTable) -> Polynomial:
    """Rewrite ``p`` over the table without generator j, substituting."""
    powers = {0: Polynomial.one(new_table)}
    acc = Polynomial.zero(new_table)
    for mono in p.terms:
        e = mono.exponents
        if e[j] not in powers:
            powers[e[j]] = replacement ** e[j]
        acc = acc + Polynomial(new_table, (e[:j] + e[j + 1:],)) * powers[e[j]]
    return acc


def _quotient_by(base: QuotientRing, v: Polynomial) -> QuotientRing:
    """The ring base/(v), re-presented on fewer generators when possible."""
    j = _eliminable_generator(v)
    if j is None:
        return QuotientRing(RingPresentation(
            base.table, base.relations + (v,), base.truncation))
    table = base.table
    new_table = GeneratorTable.build(
        [(n, d) for i, (n, d) in enumerate(zip(table.names, table.degrees))
         if i != j])
    bare = tuple(1 if i == j else 0 for i in range(len(table)))
    w = Polynomial(table, (m.exponents for m in v.terms if m.exponents != bare))
    replacement = Polynomial(new_table,
                             (m.exponents[:j] + m.exponents[j + 1:]
                              for m in w.terms))
    relations = []
    for r in base.relations:
        image = _drop_generator(r, j, replacement, new_table)
        if not image.is_zero:
            relations.append(image)
    return QuotientRing(RingPresentation(new_table, tuple(relations),
                                         base.truncation))


def serre_step(state: SerreState, next_step) -> SerreState:
    """Divide the base by the transgression image and advance the page.

    The image must be a non-zero-divisor up to the bound; this is
    certified by the exact telescoping count dim(new)_d =
    dim(old)_d - dim(old)_{d-e}, whose first failure degree locates a
    kernel element of the multiplication map.  The caller provides the
    following page's transgression (or "permanent").
    """
    if state.is_permanent:
        raise DegenerateInputError("permanent state has no further pages")
    v = state.transgression
    e = v.degree
    new_base = _quotient_by(state.base, v)
    D = state.base.truncation
    for d in range(D + 1):
        before = state.base.dimension(d)
        lower = state.base.dimension(d - e) if d >= e else 0
        if new_base.dimension(d) != before - lower:
            raise NZDViolationError(
                f"transgression image {v} is a zero divisor: multiplication "
                f"kernel in degree {d - e}", d - e)
    return SerreState(new_base, state.fiber_power + 1,
                      _coerce_step(new_base, next_step))


def run_transgression_script(base: QuotientRing, steps) -> list[SerreState]:
    """Drive a whole ordered list of transgression steps.

    Returns every intermediate state, first entry the starting page,
    last entry the permanent one.  The script must end with
    "permanent".
    """
    if not steps:
        raise DegenerateInputError("empty transgression script")
    states = [SerreState.start(base, steps[0])]
    for step in steps[1:]:
        states.append(serre_step(states[-1], step))
    if not states[-1].is_permanent:
        raise DegenerateInputError(
            "transgression script must end by marking the fiber permanent")
    return states


def page_series(state: SerreState, up_to: int | None = None) -> HilbertSeries:
    """Dimensions of base tensor F2[u^(2^k)] up to the bound."""
    bound = state.base.truncation if up_to is None else up_to
    u = state.fiber_degree
    dims = []
    for d in range(bound + 1):
        total = 0
        m = d
        while m >= 0:
            total += state.base.dimension(m)
            m -= u
        dims.append(total)
    return HilbertSeries(tuple(dims))


def serre_total(state: SerreState, up_to: int | None = None) -> HilbertSeries:
    """The limit series of a permanent state."""
    if not state.is_permanent:
        raise DegenerateInputError(
            "total series is only defined once the fiber is permanent")
    return page_series(state, up_to)


# ---------------------------------------------------------------------------
# Bockstein tower

@dataclass(frozen=True)
class BocksteinPage:
    """One page of the tower: dimensions plus bookkeeping notes.

    ``fates`` (page 2 only) classifies ring generators under the first
    differential: a cycle surviving in cohomology "survives", a
    non-cycle whose square survives is "squared", everything else is
    "killed".
    """

    number: int
    dims: tuple[int, ...]
    note: str
    fates: tuple[tuple[str, str], ...] = ()


def _image_span(ring: QuotientRing, q0: Derivation, d: int) -> gf2.EchelonBasis:
    """Span of the differential's image inside the degree-d component."""
    rows = []
    if d >= q0.shift:
        for mono in ring.basis(d - q0.shift):
            p = Polynomial.from_monomials(ring.table, (mono,))
            rows.append(ring.coords(ring.normal_form(derive(q0, p)), d))
    return gf2.rref(gf2.BitMatrix.from_vector_rows(rows, ring.dimension(d)))


def _class_is_nonzero(ring: QuotientRing, q0: Derivation, p: Polynomial) -> bool:
    """Whether a cycle's cohomology class is nonzero (not a boundary)."""
    d = p.degree
    if d is None or d + q0.shift > ring.truncation:
        return False
    target = ring.coords(p, d)
    if gf2.vec_is_zero(target):
        return False
    ok, _ = gf2.member(target, _image_span(ring, q0, d))
    return not ok


def _generator_fate(ring: QuotientRing, q0: Derivation, name: str) -> str:
    g = Polynomial.generator(ring.table, name)
    if ring.is_zero_in_ring(derive(q0, g)) and _class_is_nonzero(ring, q0, g):
        return "survives"
    if _class_is_nonzero(ring, q0, g.frobenius()):
        return "squared"
    return "killed"


def bockstein_pages(ring: QuotientRing, q0: Derivation,
                    max_page: int = 2,
                    cohomology: QCohomology | None = None) -> list[BocksteinPage]:
    """Pages of the tower as far as the parity criterion carries them.

    Page 1 is the ring; page 2 is its cohomology under ``q0``.  When
    page 2 is concentrated in even degrees every later differential
    must vanish (it maps even to odd or back), so pages up to
    ``max_page`` are copies of page 2 carrying a note saying so.
    Without that parity collapse nothing beyond page 2 is emitted,
    because higher differentials are outside this engine's reach.

    A cohomology computed elsewhere for the same ring and derivation
    can be passed in to avoid recomputing it.
    """
    if max_page < 1:
        raise DegenerateInputError("at least one page is required")
    pages = [BocksteinPage(1, ring.hilbert().coefficients,
                           "the ring itself; first differential is the derivation")]
    if max_page == 1:
        return pages
    if cohomology is not None:
        if cohomology.ring is not ring or cohomology.differential != q0:
            raise DegenerateInputError(
                "precomputed cohomology belongs to a different ring or derivation")
        h = cohomology
    else:
        h = q_cohomology(ring, q0)
    usable = h.top_degree - q0.shift
    dims = h.dims[:usable + 1]
    fates = tuple((name, _generator_fate(ring, q0, name))
                  for name in ring.table.names)
    pages.append(BocksteinPage(2, dims, "cohomology with respect to the "
                               "derivation", fates))
    collapsed = all(dims[d] == 0 for d in range(1, usable + 1, 2))
    if collapsed:
        for r in range(3, max_page + 1):
            pages.append(BocksteinPage(
                r, dims, "equal to page 2: page 2 lives in even degrees, so "
                "every higher differential vanishes"))
    return pages


def bockstein_collapses(pages: list[BocksteinPage]) -> bool:
    """Whether the emitted tower shows the parity collapse."""
    return len(pages) > 2 or (
        len(pages) == 2
        and all(v == 0 for v in pages[1].dims[1::2]))


# ---------------------------------------------------------------------------
# nilpotence at the limit

@dataclass(frozen=True)
class NilpotenceEntry:
    label: str
    square: Polynomial
    order: int | None
    witnessed: bool


def einfty_nilpotence_report(ring: QuotientRing, classes,
                             q0: Derivation | None = None,
                             labels=None) -> tuple[NilpotenceEntry, ...]:
    """Square and nilpotency verdict for each limit class.

    The classes are expected to be cycles of the tower's differential;
    pass ``q0`` to have that actually checked.  Verdicts are one-sided:
    an order is a certificate, "not witnessed" is not a disproof.
    """
    entries = []
    names = labels if labels is not None else [str(c) for c in classes]
    for label, c in zip(names, classes):
        if q0 is not None and not ring.is_zero_in_ring(derive(q0, c)):
            raise DegenerateInputError(
                f"class {label} is not a cycle of the differential")
        square = ring.normal_form(c.frobenius())
        result = nilpotency_order(c, ring)
        entries.append(NilpotenceEntry(label, square, result.order,
                                       result.witnessed))
    return tuple(entries)
