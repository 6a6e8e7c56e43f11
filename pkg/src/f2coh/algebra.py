"""Monomials, polynomials and presentations for graded F2 algebras.

Coefficients live in GF(2), so a polynomial is just a finite set of
monomials and addition is symmetric difference.  Monomials are dense
exponent vectors over a fixed generator table.  The canonical order is
graded-lexicographic: lower total degree first, and within one degree
exponent vectors in descending lexicographic order.  Degree-homogeneous
bases, parser output and printed terms all follow that single order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import (
    HomogeneityError,
    ParseError,
    TableMismatchError,
)

__all__ = [
    "GeneratorTable",
    "Monomial",
    "Polynomial",
    "RingPresentation",
    "parse_polynomial",
    "monomial_basis",
    "basis_index",
    "homogeneous_component",
    "mul_truncated",
    "pow_truncated",
]

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_']*")


@dataclass(frozen=True)
class GeneratorTable:
    """Ordered generator names with positive integer degrees."""

    names: tuple[str, ...]
    degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.names) != len(self.degrees):
            raise ValueError("names and degrees differ in length")
        seen = set()
        for name in self.names:
            if not _IDENT_RE.fullmatch(name):
                raise ValueError(f"invalid generator name {name!r}")
            if name in seen:
                raise ValueError(f"duplicate generator name {name!r}")
            seen.add(name)
        for name, deg in zip(self.names, self.degrees):
            if deg < 1:
                raise ValueError(f"generator {name!r} must have degree >= 1")
        object.__setattr__(self, "_hash", hash((self.names, self.degrees)))
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]  # type: ignore[attr-defined]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def degree_of(self, exponents: tuple[int, ...]) -> int:
        return sum(e * d for e, d in zip(exponents, self.degrees))

    @classmethod
    def build(cls, pairs: Iterable[tuple[str, int]]) -> "GeneratorTable":
        pairs = list(pairs)
        return cls(tuple(n for n, _ in pairs), tuple(d for _, d in pairs))


def _term_key(table: GeneratorTable, exponents: tuple[int, ...]):
    # graded order, descending lex inside a degree
    return (table.degree_of(exponents), tuple(-e for e in exponents))


@dataclass(frozen=True)
class Monomial:
    """A single monomial: dense exponent vector over its table."""

    table: GeneratorTable
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.exponents) != len(self.table):
            raise ValueError("exponent vector length does not match table")
        if any(e < 0 for e in self.exponents):
            raise ValueError("exponents must be non-negative")

    @property
    def degree(self) -> int:
        return self.table.degree_of(self.exponents)

    def sort_key(self):
        return _term_key(self.table, self.exponents)

    def __mul__(self, other: "Monomial") -> "Monomial":
        if self.table is not other.table and self.table != other.table:
            raise TableMismatchError("monomials over different generator tables")
        return Monomial(self.table, tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __str__(self) -> str:
        parts = []
        for name, e in zip(self.table.names, self.exponents):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


class Polynomial:
    """A GF(2) polynomial: a canonically sorted set of monomials."""

    __slots__ = ("table", "terms", "_hash")

    def __init__(self, table: GeneratorTable, exponent_sets: Iterable[tuple[int, ...]]) -> None:
        self.table = table
        unique = set(exponent_sets)
        ordered = sorted(unique, key=lambda e: _term_key(table, e))
        self.terms = tuple(Monomial(table, e) for e in ordered)
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, table: GeneratorTable) -> "Polynomial":
        return cls(table, ())

    @classmethod
    def one(cls, table: GeneratorTable) -> "Polynomial":
        return cls(table, ((0,) * len(table),))

    @classmethod
    def generator(cls, table: GeneratorTable, name: str) -> "Polynomial":
        i = table.index(name)
        exp = tuple(1 if j == i else 0 for j in range(len(table)))
        return cls(table, (exp,))

    @classmethod
    def from_monomials(cls, table: GeneratorTable, monomials: Iterable[Monomial]) -> "Polynomial":
        return cls(table, tuple(m.exponents for m in monomials))

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_homogeneous(self) -> bool:
        degs = {m.degree for m in self.terms}
        return len(degs) <= 1

    @property
    def degree(self) -> int | None:
        """Common degree of all terms; None for the zero polynomial.

        Raises HomogeneityError when terms of different degrees are mixed.
        """
        degs = {m.degree for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise HomogeneityError(
                f"polynomial mixes degrees {sorted(degs)}")
        return degs.pop()

    def exponent_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(m.exponents for m in self.terms)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    # -- arithmetic ---------------------------------------------------------

    def _check_table(self, other: "Polynomial") -> None:
        if self.table is not other.table and self.table != other.table:
            raise TableMismatchError("polynomials over different generator tables")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_table(other)
        return Polynomial(self.table, self.exponent_set() ^ other.exponent_set())

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check_table(other)
        acc: set[tuple[int, ...]] = set()
        for ma in self.terms:
            ea = ma.exponents
            for mb in other.terms:
                prod = tuple(x + y for x, y in zip(ea, mb.exponents))
                acc.symmetric_difference_update((prod,))
        return Polynomial(self.table, acc)

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative exponent")
        result = Polynomial.one(self.table)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frobenius(self) -> "Polynomial":
        """The square; F2-linear, doubling every exponent termwise."""
        return Polynomial(self.table,
                          (tuple(2 * x for x in m.exponents) for m in self.terms))

    def truncate(self, cap: int) -> "Polynomial":
        """Drop terms of degree above ``cap``."""
        return Polynomial(self.table,
                          (m.exponents for m in self.terms if m.degree <= cap))

    # -- comparison / printing ---------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.table, tuple(m.exponents for m in self.terms)))
        return self._hash

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(str(m) for m in self.terms)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def mul_truncated(a: Polynomial, b: Polynomial, cap: int) -> Polynomial:
    """Product with terms above degree ``cap`` discarded as they appear."""
    a._check_table(b)
    table = a.table
    acc: set[tuple[int, ...]] = set()
    b_terms = [(m.exponents, m.degree) for m in b.terms]
    for ma in a.terms:
        da = ma.degree
        if da > cap:
            continue
        ea = ma.exponents
        for eb, db in b_terms:
            if da + db > cap:
                continue
            prod = tuple(x + y for x, y in zip(ea, eb))
            acc.symmetric_difference_update((prod,))
    return Polynomial(table, acc)


def pow_truncated(p: Polynomial, e: int, cap: int) -> Polynomial:
    if e < 0:
        raise ValueError("negative exponent")
    result = Polynomial.one(p.table)
    base = p.truncate(cap)
    while e:
        if e & 1:
            result = mul_truncated(result, base, cap)
        base = mul_truncated(base, base, cap)
        e >>= 1
    return result


def homogeneous_component(p: Polynomial, d: int) -> Polynomial:
    return Polynomial(p.table, (m.exponents for m in p.terms if m.degree == d))


# ---------------------------------------------------------------------------
# parsing

class _Parser:
    def __init__(self, text: str, table: GeneratorTable) -> None:
        self.text = text
        self.table = table
        self.pos = 0

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Polynomial:
        p = self.parse_poly()
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error(f"unexpected {self.peek()!r}")
        return p

    def parse_poly(self) -> Polynomial:
        p = self.parse_term()
        while True:
            self.skip_ws()
            if self.peek() == "+":
                self.pos += 1
                p = p + self.parse_term()
            else:
                return p

    def parse_term(self) -> Polynomial:
        p = self.parse_factor()
        while True:
            self.skip_ws()
            if self.peek() == "*":
                self.pos += 1
                p = p * self.parse_factor()
            else:
                return p

    def parse_factor(self) -> Polynomial:
        self.skip_ws()
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            p = self.parse_poly()
            self.skip_ws()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return p
        if ch.isdigit():
            start = self.pos
            self.pos += 1
            if self.peek().isdigit():
                self.pos = start
                raise self.error("only the literals 0 and 1 are allowed here")
            if ch == "0":
                return Polynomial.zero(self.table)
            if ch == "1":
                return Polynomial.one(self.table)
            self.pos = start
            raise self.error("only the literals 0 and 1 are allowed here")
        m = _IDENT_RE.match(self.text, self.pos)
        if not m:
            raise self.error("expected generator, '(', '0' or '1'")
        name = m.group(0)
        try:
            self.table.index(name)
        except KeyError:
            raise self.error(f"unknown generator {name!r}") from None
        self.pos = m.end()
        base = Polynomial.generator(self.table, name)
        self.skip_ws()
        if self.peek() == "^":
            self.pos += 1
            self.skip_ws()
            um = re.compile(r"[0-9]+").match(self.text, self.pos)
            if not um:
                raise self.error("expected exponent after '^'")
            e = int(um.group(0))
            self.pos = um.end()
            return base ** e
        return base


def parse_polynomial(text: str, table: GeneratorTable) -> Polynomial:
    """Parse ``text`` against ``table``; raises ParseError with position."""
    return _Parser(text, table).parse()


# ---------------------------------------------------------------------------
# homogeneous monomial enumeration

@lru_cache(maxsize=None)
def _basis_exponents(table: GeneratorTable, d: int) -> tuple[tuple[int, ...], ...]:
    n = len(table)
    out: list[tuple[int, ...]] = []
    prefix = [0] * n

    def rec(i: int, remaining: int) -> None:
        if i == n:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        step = table.degrees[i]
        for e in range(remaining // step, -1, -1):
            prefix[i] = e
            rec(i + 1, remaining - e * step)
        prefix[i] = 0

    if d >= 0:
        rec(0, d)
    return tuple(out)


def monomial_basis(table: GeneratorTable, d: int) -> tuple[Monomial, ...]:
    """All monomials of degree ``d`` in canonical (descending-lex) order."""
    return tuple(Monomial(table, e) for e in _basis_exponents(table, d))


@lru_cache(maxsize=None)
def basis_index(table: GeneratorTable, d: int) -> dict[tuple[int, ...], int]:
    """Column index of each degree-``d`` exponent vector."""
    return {e: i for i, e in enumerate(_basis_exponents(table, d))}


# ---------------------------------------------------------------------------
# presentations

@dataclass(frozen=True)
class RingPresentation:
    """Generators, homogeneous relations and a truncation degree."""

    table: GeneratorTable
    relations: tuple[Polynomial, ...]
    truncation: int

    def __post_init__(self) -> None:
        if self.truncation < 1:
            raise ValueError("truncation degree must be >= 1")
        for i, r in enumerate(self.relations):
            if r.table != self.table:
                raise TableMismatchError(f"relation {i} is over a different table")
            if r.is_zero:
                raise ValueError(f"relation {i} is the zero polynomial")
            d = r.degree  # raises HomogeneityError when mixed
            if d == 0:
                raise ValueError(
                    f"relation {i} has degree 0; degree-0 relations are rejected")
            if d > self.truncation:
                raise ValueError(
                    f"relation {i} has degree {d} above the truncation "
                    f"bound {self.truncation}")

    @property
    def max_relation_degree(self) -> int:
        return max((r.degree for r in self.relations), default=0)
