"""Degree-truncated calculus in finitely presented graded F2 algebras.

The ideal of a presentation is never given a global Groebner-style
basis.  Instead each degree ``d`` up to the truncation bound gets its
own *slice*: the span of all products monomial * relation landing in
degree ``d``, kept as a reduced echelon basis over the canonical
monomial columns.  Normal forms, quotient dimensions, regularity tests,
nilpotency probes and morphism ranks are all linear algebra against
those slices.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import gf2
from .algebra import (
    GeneratorTable,
    Monomial,
    Polynomial,
    RingPresentation,
    basis_index,
    monomial_basis,
)
from .errors import (
    DegenerateInputError,
    HomogeneityError,
    TableMismatchError,
    TruncationError,
)
from .series import HilbertSeries, RationalForm

__all__ = [
    "QuotientRing",
    "DegreeSlice",
    "RingMorphism",
    "NzdResult",
    "NilpotencyResult",
    "MorphismCheck",
    "MorphismRank",
    "normal_form",
    "hilbert",
    "is_nonzerodivisor",
    "nilpotency_order",
    "nilradical_slice",
    "ideal_slice_in_quotient",
    "morphism_check",
    "morphism_rank",
]


class QuotientRing:
    """A presentation together with its per-degree slice caches.

    Instances are safe to query from several threads once built; lazy
    cache fills are guarded by a lock.
    """

    def __init__(self, presentation: RingPresentation) -> None:
        self.presentation = presentation
        self._slices: dict[int, gf2.EchelonBasis] = {}
        self._bases: dict[int, tuple[Monomial, ...]] = {}
        self._qindex: dict[int, dict[tuple[int, ...], int]] = {}
        self._nilslices: dict[int, "DegreeSlice"] = {}
        self._free_dims: list[int] | None = None
        self._lock = threading.RLock()

    @classmethod
    def free(cls, table: GeneratorTable, truncation: int) -> "QuotientRing":
        return cls(RingPresentation(table, (), truncation))

    @classmethod
    def quotient(cls, table: GeneratorTable, relations: Sequence[Polynomial],
                 truncation: int) -> "QuotientRing":
        return cls(RingPresentation(table, tuple(relations), truncation))

    # -- basic views --------------------------------------------------------

    @property
    def table(self) -> GeneratorTable:
        return self.presentation.table

    @property
    def relations(self) -> tuple[Polynomial, ...]:
        return self.presentation.relations

    @property
    def truncation(self) -> int:
        return self.presentation.truncation

    @property
    def is_free(self) -> bool:
        return not self.relations

    def _check_degree(self, d: int) -> None:
        if d < 0:
            raise DegenerateInputError(f"negative degree {d}")
        if d > self.truncation:
            raise TruncationError(
                f"degree {d} beyond truncation bound {self.truncation}")

    # -- ideal slices and quotient bases ------------------------------------

    def ideal_slice(self, d: int) -> gf2.EchelonBasis:
        """Echelon basis of the ideal's degree-``d`` component."""
        self._check_degree(d)
        with self._lock:
            cached = self._slices.get(d)
        if cached is not None:
            return cached
        cols = len(monomial_basis(self.table, d))
        index = basis_index(self.table, d)
        rows: list[list[int]] = []
        for r in self.relations:
            e = r.degree
            if e > d:
                continue
            terms = [t.exponents for t in r.terms]
            for m in monomial_basis(self.table, d - e):
                me = m.exponents
                rows.append([index[tuple(a + b for a, b in zip(me, t))] for t in terms])
        slice_basis = gf2.rref(gf2.BitMatrix.from_index_rows(rows, cols))
        with self._lock:
            self._slices.setdefault(d, slice_basis)
            return self._slices[d]

    def basis(self, d: int) -> tuple[Monomial, ...]:
        """Monomials spanning the quotient's degree-``d`` component."""
        self._check_degree(d)
        with self._lock:
            cached = self._bases.get(d)
        if cached is not None:
            return cached
        monomials = monomial_basis(self.table, d)
        if self.is_free:
            result = monomials
        else:
            pivots = set(self.ideal_slice(d).pivots)
            result = tuple(m for c, m in enumerate(monomials) if c not in pivots)
        with self._lock:
            self._bases.setdefault(d, result)
            self._qindex.setdefault(d, {m.exponents: i for i, m in enumerate(result)})
            return self._bases[d]

    def dimension(self, d: int) -> int:
        self._check_degree(d)
        if self.is_free:
            if self._free_dims is None:
                dims = [0] * (self.truncation + 1)
                dims[0] = 1
                for g in self.table.degrees:
                    for k in range(g, self.truncation + 1):
                        dims[k] += dims[k - g]
                self._free_dims = dims
            return self._free_dims[d]
        return len(self.basis(d))

    def build(self, up_to: int | None = None) -> None:
        """Populate slice caches eagerly (useful before threaded queries)."""
        bound = self.truncation if up_to is None else up_to
        for d in range(bound + 1):
            self.basis(d)

    # -- vector views --------------------------------------------------------

    def _homogeneous_degree(self, p: Polynomial, d: int | None = None) -> int:
        if p.table != self.table:
            raise TableMismatchError("polynomial is over a different table")
        pd = p.degree  # may raise HomogeneityError
        if pd is None:
            if d is None:
                raise DegenerateInputError("zero polynomial needs an explicit degree")
            pd = d
        if d is not None and pd != d:
            raise HomogeneityError(f"expected degree {d}, got {pd}")
        self._check_degree(pd)
        return pd

    def vectorize(self, p: Polynomial, d: int | None = None) -> np.ndarray:
        """Packed coefficient vector over the monomial columns of degree d."""
        pd = self._homogeneous_degree(p, d)
        index = basis_index(self.table, pd)
        return gf2.vec_from_indices(
            [index[m.exponents] for m in p.terms], len(index))

    def devectorize(self, v: np.ndarray, d: int) -> Polynomial:
        monomials = monomial_basis(self.table, d)
        return Polynomial(
            self.table,
            (monomials[c].exponents for c in gf2.vec_to_indices(v, len(monomials))))

    def normal_form(self, p: Polynomial) -> Polynomial:
        """The canonical representative of ``p`` modulo the ideal."""
        if p.is_zero:
            return p
        pd = self._homogeneous_degree(p)
        if self.is_free:
            return p
        rem, _ = gf2.reduce_vector(self.vectorize(p, pd), self.ideal_slice(pd))
        return self.devectorize(rem, pd)

    def is_zero_in_ring(self, p: Polynomial) -> bool:
        return self.normal_form(p).is_zero

    def in_ideal(self, p: Polynomial) -> bool:
        return self.is_zero_in_ring(p)

    def coords(self, p: Polynomial, d: int | None = None) -> np.ndarray:
        """Coordinates of ``normal_form(p)`` over the quotient basis."""
        nf = self.normal_form(p) if not p.is_zero else p
        pd = self._homogeneous_degree(nf, d)
        b = self.basis(pd)
        qindex = self._qindex[pd]
        return gf2.vec_from_indices(
            [qindex[m.exponents] for m in nf.terms], len(b))

    def from_coords(self, v: np.ndarray, d: int) -> Polynomial:
        b = self.basis(d)
        return Polynomial(self.table,
                          (b[i].exponents for i in gf2.vec_to_indices(v, len(b))))

    # -- series --------------------------------------------------------------

    def hilbert(self) -> HilbertSeries:
        """Quotient dimensions for every degree up to the bound."""
        return HilbertSeries(tuple(self.dimension(d)
                                   for d in range(self.truncation + 1)))

    def __repr__(self) -> str:
        gens = ", ".join(f"{n}:{d}" for n, d in
                         zip(self.table.names, self.table.degrees))
        return (f"QuotientRing([{gens}], {len(self.relations)} relations, "
                f"D={self.truncation})")


# ---------------------------------------------------------------------------
# free functions mirroring the operation names

def normal_form(p: Polynomial, q: QuotientRing) -> Polynomial:
    return q.normal_form(p)


def hilbert(q: QuotientRing) -> HilbertSeries:
    return q.hilbert()


@dataclass(frozen=True)
class NzdResult:
    """Outcome of a degreewise injectivity check for multiplication."""

    element: Polynomial
    ok: bool
    checked_up_to: int
    failures: tuple[int, ...]


def is_nonzerodivisor(f: Polynomial, q: QuotientRing) -> NzdResult:
    """Is multiplication by ``f`` injective on every checkable degree?

    Checks ``Q_d -> Q_{d+e}`` for all ``d <= D - e``; a degree lands in
    ``failures`` when the multiplication map has a kernel there.
    """
    fn = q.normal_form(f)
    if fn.is_zero:
        return NzdResult(f, False, q.truncation, (0,))
    e = fn.degree or 0
    bound = q.truncation - e
    failures = []
    for d in range(bound + 1):
        b = q.basis(d)
        if not b:
            continue
        rows = [q.coords(fn * Polynomial.from_monomials(q.table, (m,)), d + e)
                for m in b]
        mat = gf2.BitMatrix.from_vector_rows(rows, len(q.basis(d + e)))
        if gf2.rref(mat).rank != len(b):
            failures.append(d)
    return NzdResult(f, not failures, bound, tuple(failures))


@dataclass(frozen=True)
class NilpotencyResult:
    """Frobenius-probe verdict: order ``2^k`` or not witnessed in bound."""

    order: int | None
    frobenius_steps: int
    witnessed: bool
    bound: int


def nilpotency_order(p: Polynomial, q: QuotientRing) -> NilpotencyResult:
    """Smallest power of two annihilating ``p``, probed via squaring.

    Only powers ``2^k`` are probed, so the reported order is the least
    power of two that vanishes, not necessarily the least power overall.
    Beyond the truncation bound the verdict is one-sided: ``witnessed``
    is False and no order is claimed.
    """
    x = q.normal_form(p)
    if x.is_zero:
        return NilpotencyResult(1, 0, True, q.truncation)
    d = x.degree
    if d == 0:
        raise DegenerateInputError("degree-0 elements are units; no nilpotency probe")
    k = 0
    deg = d
    while 2 * deg <= q.truncation:
        x = q.normal_form(x.frobenius())
        deg *= 2
        k += 1
        if x.is_zero:
            return NilpotencyResult(2 ** k, k, True, q.truncation)
    return NilpotencyResult(None, k, False, q.truncation)


@dataclass(frozen=True)
class DegreeSlice:
    """An echelon-basis subspace of one graded component.

    Coordinates refer to the quotient basis of the owning ring at
    ``degree``.  For nilradical slices ``frobenius_steps`` records how
    many squarings the truncation bound allowed; membership is then a
    one-sided "witnessed nilpotent within the bound" statement.
    """

    degree: int
    ambient_dimension: int
    space: gf2.EchelonBasis
    frobenius_steps: int | None = None

    @property
    def dim(self) -> int:
        return self.space.rank

    def contains(self, coords: np.ndarray) -> bool:
        ok, _ = gf2.member(coords, self.space)
        return ok


def nilradical_slice(q: QuotientRing, d: int) -> DegreeSlice:
    """Elements of degree ``d`` witnessed nilpotent within the bound.

    Two sources feed the slice.  The kernel of the longest Frobenius
    chain the bound allows catches elements whose own iterated square
    reduces to zero; the kernels of successive chains only grow, so the
    last computable one suffices.  On top of that, generator multiples
    of lower slices are folded in, because any multiple of a certified
    nilpotent is again nilpotent even when its own chain is too short
    to witness that directly.  Slices are built degree-ascending and
    cached on the ring.  Requires ``1 <= d`` and ``2d <= D``.
    """
    if d < 1:
        raise DegenerateInputError("nilradical slices start at degree 1")
    if 2 * d > q.truncation:
        raise TruncationError(
            f"cannot witness any squaring from degree {d} under bound {q.truncation}")
    with q._lock:
        cached = q._nilslices.get(d)
    if cached is not None:
        return cached
    b = q.basis(d)
    reps = [Polynomial.from_monomials(q.table, (m,)) for m in b]
    deg = d
    k = 0
    while 2 * deg <= q.truncation:
        reps = [q.normal_form(x.frobenius()) for x in reps]
        deg *= 2
        k += 1
    target_dim = len(q.basis(deg))
    chain = [q.coords(x, deg) for x in reps]
    ker = gf2.kernel(gf2.transpose(gf2.BitMatrix.from_vector_rows(chain, target_dim)))
    rows = [ker.matrix.row(i) for i in range(ker.rank)]
    for name, e in zip(q.table.names, q.table.degrees):
        if d - e < 1:
            continue
        lower = nilradical_slice(q, d - e)
        if lower.dim == 0:
            continue
        g = Polynomial.generator(q.table, name)
        for i in range(lower.dim):
            x = q.from_coords(lower.space.matrix.row(i), d - e)
            rows.append(q.coords(g * x, d))
    span = gf2.rref(gf2.BitMatrix.from_vector_rows(rows, len(b)))
    out = DegreeSlice(d, len(b), span, frobenius_steps=k)
    with q._lock:
        q._nilslices.setdefault(d, out)
        return q._nilslices[d]


def ideal_slice_in_quotient(q: QuotientRing, gens: Sequence[Polynomial],
                            d: int) -> DegreeSlice:
    """Degree-``d`` component of the ideal generated by ``gens`` in ``q``."""
    q._check_degree(d)
    rows = []
    for g in gens:
        e = q._homogeneous_degree(g)
        if e > d:
            continue
        for m in monomial_basis(q.table, d - e):
            nf = q.normal_form(g * Polynomial.from_monomials(q.table, (m,)))
            rows.append(q.coords(nf, d))
    n = len(q.basis(d))
    span = gf2.rref(gf2.BitMatrix.from_vector_rows(rows, n))
    return DegreeSlice(d, n, span)


# ---------------------------------------------------------------------------
# morphisms

@dataclass(frozen=True)
class RingMorphism:
    """Graded map determined by generator images in the target."""

    source: QuotientRing
    target: QuotientRing
    images: tuple[Polynomial, ...]
    _power_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        src = self.source.table
        if len(self.images) != len(src):
            raise ValueError("one image per source generator required")
        for name, deg, img in zip(src.names, src.degrees, self.images):
            if img.table != self.target.table:
                raise TableMismatchError(f"image of {name!r} is over the wrong table")
            d = img.degree  # HomogeneityError on mixed terms
            if d is not None and d != deg:
                raise ValueError(
                    f"image of {name!r} has degree {d}, expected {deg}")

    def _power(self, i: int, e: int) -> Polynomial:
        key = (i, e)
        hit = self._power_cache.get(key)
        if hit is None:
            hit = self.images[i] ** e
            self._power_cache[key] = hit
        return hit

    def apply(self, p: Polynomial) -> Polynomial:
        """Image of ``p`` in the target's ambient ring (not reduced)."""
        if p.table != self.source.table:
            raise TableMismatchError("polynomial is not over the source table")
        out = Polynomial.zero(self.target.table)
        for m in p.terms:
            term = Polynomial.one(self.target.table)
            for i, e in enumerate(m.exponents):
                if e:
                    term = term * self._power(i, e)
            out = out + term
        return out


@dataclass(frozen=True)
class MorphismCheck:
    ok: bool
    failures: tuple[tuple[int, str], ...]  # (relation index, offending image nf)


def morphism_check(m: RingMorphism) -> MorphismCheck:
    """Well-definedness: every source relation must map into the target ideal."""
    failures = []
    for i, r in enumerate(m.source.relations):
        img = m.target.normal_form(m.apply(r))
        if not img.is_zero:
            failures.append((i, str(img)))
    return MorphismCheck(not failures, tuple(failures))


@dataclass(frozen=True)
class MorphismRank:
    degree: int
    rank: int
    source_dim: int
    injective: bool


def morphism_rank(m: RingMorphism, d: int) -> MorphismRank:
    """Rank of the induced map on degree-``d`` components."""
    m.source._check_degree(d)
    m.target._check_degree(d)
    b = m.source.basis(d)
    rows = [m.target.coords(m.target.normal_form(
        m.apply(Polynomial.from_monomials(m.source.table, (mono,)))), d)
        for mono in b]
    mat = gf2.BitMatrix.from_vector_rows(rows, len(m.target.basis(d)))
    r = gf2.rref(mat).rank
    return MorphismRank(d, r, len(b), r == len(b))
