"""Steenrod squares, Milnor derivations and differential cohomology.

Squares are defined on generators by explicit tables (for classifying
spaces of the orthogonal groups these are the Wu formulas) and extended
to arbitrary polynomials through the Cartan formula.  The Milnor
operations Q_i come in two independent implementations: the Sq-recursion
``Q_0 = Sq^1, Q_{i+1} = Sq^{2^{i+1}} Q_i + Q_i Sq^{2^{i+1}}`` and the
Leibniz extension of their generator values.  Their agreement is a
provable identity, which the test-suite exercises rather than assumes.
"""
from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .algebra import (GeneratorTable, Monomial, Polynomial,
                      homogeneous_component, mul_truncated, pow_truncated)
from .errors import (DegenerateInputError, DescentError, DifferentialError,
                     HomogeneityError, TableMismatchError, TruncationError)
from .rings import QuotientRing

__all__ = [
    "SteenrodSpec",
    "Derivation",
    "QCohomology",
    "sq",
    "milnor_q",
    "derive",
    "composite_square_check",
    "q_cohomology",
]


@dataclass(frozen=True)
class SteenrodSpec:
    """Squares on generators: for g of degree n the list Sq0 g .. Sqn g.

    The unstable axioms on generators (Sq0 g = g, Sqn g = g squared) and
    the degree of every listed value are checked at construction, so a
    mistyped table fails at load time rather than mid-computation.
    """

    table: GeneratorTable
    squares: tuple[tuple[Polynomial, ...], ...]

    def __post_init__(self) -> None:
        if len(self.squares) != len(self.table):
            raise ValueError("one square list per generator required")
        for j, (name, n) in enumerate(zip(self.table.names, self.table.degrees)):
            row = self.squares[j]
            if len(row) != n + 1:
                raise ValueError(
                    f"generator {name!r} of degree {n} needs {n + 1} squares, "
                    f"got {len(row)}")
            g = Polynomial.generator(self.table, name)
            for i, value in enumerate(row):
                if value.table != self.table:
                    raise TableMismatchError(
                        f"square of {name!r} is over a different table")
                vd = value.degree
                if vd is not None and vd != n + i:
                    raise ValueError(
                        f"Sq^{i} of {name!r} has degree {vd}, expected {n + i}")
            if row[0] != g:
                raise ValueError(f"Sq^0 of {name!r} must be the generator itself")
            if row[n] != g.frobenius():
                raise ValueError(f"Sq^{n} of {name!r} must be its square")
        totals = tuple(self._sum(row) for row in self.squares)
        object.__setattr__(self, "_totals", totals)

    @staticmethod
    def _sum(row: tuple[Polynomial, ...]) -> Polynomial:
        acc = row[0]
        for value in row[1:]:
            acc = acc + value
        return acc

    def total_square(self, j: int) -> Polynomial:
        """The inhomogeneous sum Sq0 g + Sq1 g + ... for generator j."""
        return self._totals[j]

    def square_on_generator(self, j: int, i: int) -> Polynomial:
        row = self.squares[j]
        if 0 <= i < len(row):
            return row[i]
        return Polynomial.zero(self.table)


def sq(k: int, p: Polynomial, spec: SteenrodSpec) -> Polynomial:
    """Sq^k of a homogeneous polynomial by Cartan expansion.

    Each monomial is sent to the product of its generators' total
    squares, truncated above the target degree, and the degree
    ``deg p + k`` component is extracted.  The unstable identities
    (Sq^k p = 0 for k above deg p, Sq^deg p = squaring) are consequences
    of the generator tables rather than special cases here.
    """
    if k < 0:
        raise DegenerateInputError(f"negative square index {k}")
    if p.table != spec.table:
        raise TableMismatchError("polynomial and square table disagree")
    if p.is_zero:
        return p
    d = p.degree  # raises HomogeneityError on mixed input
    target = d + k
    out = Polynomial.zero(p.table)
    for mono in p.terms:
        prod = Polynomial.one(p.table)
        for j, e in enumerate(mono.exponents):
            if e:
                prod = mul_truncated(
                    prod, pow_truncated(spec.total_square(j), e, target), target)
        out = out + homogeneous_component(prod, target)
    return out


def milnor_q(i: int, p: Polynomial, spec: SteenrodSpec) -> Polynomial:
    """Milnor primitive Q_i via the square recursion.

    Q_0 = Sq^1 and Q_{i+1} = Sq^{2^{i+1}} Q_i + Q_i Sq^{2^{i+1}}.
    Raises the degree by 2^{i+1} - 1.
    """
    if i < 0:
        raise DegenerateInputError(f"negative Milnor index {i}")
    if i == 0:
        return sq(1, p, spec)
    s = 2 ** i
    return (sq(s, milnor_q(i - 1, p, spec), spec)
            + milnor_q(i - 1, sq(s, p, spec), spec))


@dataclass(frozen=True)
class Derivation:
    """A degree-raising derivation given by its values on generators.

    ``shift`` is the degree raise (2^{i+1} - 1 for the Milnor Q_i); the
    extension to products is the Leibniz rule, evaluated by `derive`.
    """

    table: GeneratorTable
    shift: int
    values: tuple[Polynomial, ...]
    name: str = "d"

    def __post_init__(self) -> None:
        if self.shift < 1:
            raise ValueError("derivation shift must be positive")
        if len(self.values) != len(self.table):
            raise ValueError("one value per generator required")
        for name, n, value in zip(self.table.names, self.table.degrees, self.values):
            if value.table != self.table:
                raise TableMismatchError(
                    f"value of {name!r} is over a different table")
            vd = value.degree
            if vd is not None and vd != n + self.shift:
                raise ValueError(
                    f"derivation value of {name!r} has degree {vd}, "
                    f"expected {n + self.shift}")

    def __call__(self, p: Polynomial) -> Polynomial:
        return derive(self, p)


def derive(d: Derivation, p: Polynomial) -> Polynomial:
    """Leibniz extension of a derivation to any polynomial.

    Over GF(2) only odd exponents survive differentiation: for a
    monomial m and generator g with exponent e, the g-term contributes
    d(g) * m / g exactly when e is odd.
    """
    if p.table != d.table:
        raise TableMismatchError("polynomial is over a different table")
    out = Polynomial.zero(p.table)
    for mono in p.terms:
        exps = mono.exponents
        for j, e in enumerate(exps):
            if e & 1:
                rest = exps[:j] + (e - 1,) + exps[j + 1:]
                out = out + d.values[j] * Polynomial(p.table, (rest,))
    return out


def composite_square_check(spec: SteenrodSpec, x: Polynomial, k: int) -> bool:
    """Whether Q_k(x) equals Sq^{2^k} ... Sq^2 Sq^1 (x) for degree-2 x.

    For two-dimensional classes the Milnor recursion telescopes to a
    single composite of squares; this checks the two routes agree.  The
    zero element passes vacuously; any other input must have degree 2.
    """
    if k < 1:
        raise DegenerateInputError("composite form needs k >= 1")
    if not x.is_zero and x.degree != 2:
        raise DegenerateInputError("composite identity applies to degree-2 classes")
    composite = x
    for i in range(k + 1):
        composite = sq(2 ** i, composite, spec)
    return composite == milnor_q(k, x, spec)


# ---------------------------------------------------------------------------
# differential cohomology of a quotient ring

@dataclass(frozen=True)
class QCohomology:
    """Per-degree kernel/image/cohomology data of a differential.

    Degrees run from 0 to D - shift (the last degree whose outgoing map
    still lands under the bound).  The top ``shift`` degrees of that
    range are flagged as edge degrees: their incoming image is computed
    from maps whose own verification window is exhausted, so acceptance
    comparisons exclude them.
    """

    ring: QuotientRing
    differential: Derivation
    kernel_ranks: tuple[int, ...]
    image_ranks: tuple[int, ...]
    dims: tuple[int, ...]
    representatives: tuple[tuple[Polynomial, ...], ...]

    @property
    def top_degree(self) -> int:
        return len(self.dims) - 1

    def is_edge(self, d: int) -> bool:
        return d > self.top_degree - self.differential.shift

    def dimension(self, d: int) -> int:
        if not 0 <= d <= self.top_degree:
            raise TruncationError(
                f"degree {d} outside the evaluable range 0..{self.top_degree}")
        return self.dims[d]

    def series(self, up_to: int | None = None) -> tuple[int, ...]:
        """Cohomology dimensions by degree, for series comparisons."""
        bound = self.top_degree if up_to is None else up_to
        if bound > self.top_degree:
            raise TruncationError(
                f"degree {bound} outside the evaluable range 0..{self.top_degree}")
        return self.dims[:bound + 1]


def _differential_matrix(ring: QuotientRing, d: Derivation, t: int) -> gf2.BitMatrix:
    """Matrix of the degree-t component, quotient basis to quotient basis."""
    rows = []
    for mono in ring.basis(t):
        image = ring.normal_form(derive(d, Polynomial.from_monomials(ring.table, (mono,))))
        rows.append(ring.coords(image, t + d.shift))
    return gf2.BitMatrix.from_vector_rows(rows, ring.dimension(t + d.shift))


def _thread_count() -> int:
    raw = os.environ.get("F2COH_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, n)


def q_cohomology(ring: QuotientRing, d: Derivation) -> QCohomology:
    """Kernel, image and cohomology of a derivation acting on a quotient.

    The derivation must descend to the quotient (every relation must map
    into the ideal) and square to zero there; both are checked, the
    first because correctness of everything downstream rests on it, the
    second degree-wise as far as the bound allows.  Representatives are
    kernel vectors with the image's pivot coordinates cleared, which
    makes them canonical for the ring's monomial order.
    """
    if d.table != ring.table:
        raise TableMismatchError("derivation is over a different table")
    D = ring.truncation
    if 2 * d.shift > D:
        raise TruncationError(
            f"shift {d.shift} leaves no room to verify a differential under {D}")
    for r in ring.relations:
        rd = r.degree
        if rd + d.shift > D:
            raise TruncationError(
                f"cannot verify descent for a degree-{rd} relation under {D}")
        if not ring.in_ideal(derive(d, r)):
            raise DescentError(
                f"derivation does not descend: d({r}) is not in the ideal")
    for j, name in enumerate(ring.table.names):
        twice = ring.table.degrees[j] + 2 * d.shift
        if twice <= D and not ring.in_ideal(derive(d, d.values[j])):
            raise DifferentialError(
                f"does not square to zero: d(d({name})) is nonzero in the ring")

    top = D - d.shift
    ring.build()

    def per_degree(t: int) -> tuple[gf2.EchelonBasis, gf2.EchelonBasis]:
        mat = _differential_matrix(ring, d, t)
        return gf2.kernel(gf2.transpose(mat)), gf2.rref(mat)

    degrees = range(top + 1)
    threads = _thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            computed = list(pool.map(per_degree, degrees))
    else:
        computed = [per_degree(t) for t in degrees]

    kernel_ranks = []
    image_ranks = []
    dims = []
    reps: list[tuple[Polynomial, ...]] = []
    for t in degrees:
        ker, _ = computed[t]
        if t >= d.shift:
            image = computed[t - d.shift][1]
        else:
            image = gf2.rref(gf2.BitMatrix.from_vector_rows([], ring.dimension(t)))
        for i in range(image.rank):
            ok, _ = gf2.member(image.matrix.row(i), ker)
            if not ok:
                raise DifferentialError(
                    f"does not square to zero at degree {t - d.shift}")
        kernel_ranks.append(ker.rank)
        image_ranks.append(image.rank)
        dims.append(ker.rank - image.rank)
        chosen = []
        for i in range(ker.rank):
            reduced, _ = gf2.reduce_vector(ker.matrix.row(i), image)
            if not gf2.vec_is_zero(reduced):
                chosen.append(reduced)
        basis = gf2.rref(gf2.BitMatrix.from_vector_rows(chosen, ring.dimension(t)))
        assert basis.rank == ker.rank - image.rank
        reps.append(tuple(ring.from_coords(basis.matrix.row(i), t)
                          for i in range(basis.rank)))
    return QCohomology(ring, d, tuple(kernel_ranks), tuple(image_ranks),
                       tuple(dims), tuple(reps))
