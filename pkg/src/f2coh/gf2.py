"""Exact linear algebra over GF(2) on packed bit matrices.

Rows are packed 64 columns per ``uint64`` word (column ``c`` lives in
word ``c >> 6``, bit ``c & 63``).  Pad bits past the last column are
kept at zero.  All reductions produce the reduced row-echelon form, so
row spaces have a unique canonical representation and every derived
object (ranks, kernels, membership coordinates) is deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._kernels import WORD, popcount_words, rref_core
from .errors import DimensionMismatchError

__all__ = [
    "BitMatrix",
    "EchelonBasis",
    "rref",
    "rank",
    "kernel",
    "member",
    "reduce_vector",
    "transpose",
    "mat_vec",
    "mat_mul",
    "vec_zeros",
    "vec_from_indices",
    "vec_to_indices",
    "vec_is_zero",
]


def _nwords(cols: int) -> int:
    return (cols + WORD - 1) // WORD


def vec_zeros(cols: int) -> np.ndarray:
    """Packed all-zero bit vector with ``cols`` logical entries."""
    return np.zeros(_nwords(cols), dtype=np.uint64)


def vec_from_indices(indices: Iterable[int], cols: int) -> np.ndarray:
    v = vec_zeros(cols)
    for c in indices:
        if not 0 <= c < cols:
            raise DimensionMismatchError(f"bit index {c} outside 0..{cols - 1}")
        v[c >> 6] ^= np.uint64(1) << np.uint64(c & 63)
    return v


def vec_to_indices(v: np.ndarray, cols: int) -> tuple[int, ...]:
    out = []
    for w in range(v.shape[0]):
        word = int(v[w])
        while word:
            low = word & -word
            out.append(WORD * w + low.bit_length() - 1)
            word ^= low
    return tuple(c for c in out if c < cols)


def vec_is_zero(v: np.ndarray) -> bool:
    return not v.any()


class BitMatrix:
    """Dense GF(2) matrix with rows packed into uint64 words."""

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None) -> None:
        if rows < 0 or cols < 0:
            raise DimensionMismatchError("matrix dimensions must be non-negative")
        self.rows = rows
        self.cols = cols
        if words is None:
            words = np.zeros((rows, _nwords(cols)), dtype=np.uint64)
        else:
            if words.shape != (rows, _nwords(cols)):
                raise DimensionMismatchError(
                    f"backing array shape {words.shape} does not match "
                    f"{rows}x{cols} bit matrix")
            words = np.ascontiguousarray(words, dtype=np.uint64)
        self.words = words

    @property
    def nwords(self) -> int:
        return _nwords(self.cols)

    @classmethod
    def from_index_rows(cls, rows: Sequence[Iterable[int]], cols: int) -> "BitMatrix":
        """Build from per-row iterables of set column indices."""
        m = cls(len(rows), cols)
        for r, indices in enumerate(rows):
            for c in indices:
                if not 0 <= c < cols:
                    raise DimensionMismatchError(f"bit index {c} outside 0..{cols - 1}")
                m.words[r, c >> 6] ^= np.uint64(1) << np.uint64(c & 63)
        return m

    @classmethod
    def from_vector_rows(cls, vectors: Sequence[np.ndarray], cols: int) -> "BitMatrix":
        m = cls(len(vectors), cols)
        for r, v in enumerate(vectors):
            if v.shape[0] != m.nwords:
                raise DimensionMismatchError("vector width does not match matrix")
            m.words[r] = v
        return m

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "BitMatrix":
        """Build from a 2-D 0/1 array."""
        dense = np.asarray(dense, dtype=np.uint8) & 1
        rows, cols = dense.shape
        padded = np.zeros((rows, _nwords(cols) * WORD), dtype=np.uint8)
        padded[:, :cols] = dense
        words = np.packbits(padded, axis=1, bitorder="little")
        words = np.ascontiguousarray(words).view(np.uint64).reshape(rows, _nwords(cols))
        return cls(rows, cols, words.copy())

    def to_dense(self) -> np.ndarray:
        """Unpack to a 2-D uint8 0/1 array."""
        if self.nwords == 0:
            return np.zeros((self.rows, self.cols), dtype=np.uint8)
        u8 = np.ascontiguousarray(self.words).view(np.uint8)
        bits = np.unpackbits(u8, axis=1, bitorder="little")
        return bits[:, :self.cols]

    def get(self, r: int, c: int) -> int:
        return int((self.words[r, c >> 6] >> np.uint64(c & 63)) & np.uint64(1))

    def set(self, r: int, c: int, value: int = 1) -> None:
        bit = np.uint64(1) << np.uint64(c & 63)
        if value:
            self.words[r, c >> 6] |= bit
        else:
            self.words[r, c >> 6] &= ~bit

    def row(self, r: int) -> np.ndarray:
        return self.words[r].copy()

    def row_indices(self, r: int) -> tuple[int, ...]:
        return vec_to_indices(self.words[r], self.cols)

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.words.copy())

    def dump(self) -> str:
        """Debug view: one line of 0/1 characters per row."""
        dense = self.to_dense()
        return "\n".join("".join("1" if b else "0" for b in row) for row in dense)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (self.rows == other.rows and self.cols == other.cols
                and bool(np.array_equal(self.words, other.words)))

    def __hash__(self) -> int:  # pragma: no cover - not used as dict keys
        return hash((self.rows, self.cols, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


@dataclass(frozen=True)
class EchelonBasis:
    """Row space in reduced row-echelon form plus its pivot columns."""

    matrix: BitMatrix
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def cols(self) -> int:
        return self.matrix.cols

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EchelonBasis):
            return NotImplemented
        return self.pivots == other.pivots and self.matrix == other.matrix


def rref(m: BitMatrix, pivot_limit: int | None = None) -> EchelonBasis:
    """Reduced row-echelon form of ``m``'s row space.

    Zero rows are dropped.  ``pivot_limit`` restricts pivot search to the
    leading columns, which supports augmented-matrix solves.
    """
    limit = m.cols if pivot_limit is None else pivot_limit
    if not 0 <= limit <= m.cols:
        raise DimensionMismatchError("pivot_limit outside column range")
    work = np.ascontiguousarray(m.words.copy())
    if work.shape[0] == 0 or limit == 0:
        return EchelonBasis(BitMatrix(0, m.cols), ())
    r, pivots = rref_core(work, m.cols, limit)
    reduced = BitMatrix(int(r), m.cols, work[:int(r)].copy())
    return EchelonBasis(reduced, tuple(int(c) for c in pivots))


def rank(m: BitMatrix) -> int:
    return rref(m).rank


def reduce_vector(v: np.ndarray, basis: EchelonBasis) -> tuple[np.ndarray, np.ndarray]:
    """Reduce ``v`` against an echelon basis.

    Returns ``(remainder, coords)`` where ``coords`` is a packed bit
    vector over the basis rows such that ``v = remainder + coords·basis``.
    The remainder is zero exactly when ``v`` lies in the row space.
    """
    if v.shape[0] != basis.matrix.nwords:
        raise DimensionMismatchError("vector width does not match basis")
    rem = v.copy()
    coords = vec_zeros(max(basis.rank, 0))
    for i, c in enumerate(basis.pivots):
        if (rem[c >> 6] >> np.uint64(c & 63)) & np.uint64(1):
            rem ^= basis.matrix.words[i]
            coords[i >> 6] ^= np.uint64(1) << np.uint64(i & 63)
    return rem, coords


def member(v: np.ndarray, basis: EchelonBasis) -> tuple[bool, np.ndarray | None]:
    """Row-space membership; on success also the basis coordinates."""
    rem, coords = reduce_vector(v, basis)
    if rem.any():
        return False, None
    return True, coords


def kernel(m: BitMatrix) -> EchelonBasis:
    """Canonical basis of the null space ``{x : m·x = 0}``."""
    eb = rref(m)
    pivot_set = set(eb.pivots)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    vectors = []
    for f in free_cols:
        v = vec_zeros(m.cols)
        v[f >> 6] ^= np.uint64(1) << np.uint64(f & 63)
        for i, p in enumerate(eb.pivots):
            if eb.matrix.get(i, f):
                v[p >> 6] ^= np.uint64(1) << np.uint64(p & 63)
        vectors.append(v)
    stacked = BitMatrix.from_vector_rows(vectors, m.cols)
    out = rref(stacked)
    # rank-nullity must hold exactly
    assert out.rank + eb.rank == m.cols, "rank-nullity violated"
    return out


def transpose(m: BitMatrix) -> BitMatrix:
    return BitMatrix.from_dense(m.to_dense().T) if m.rows and m.cols else BitMatrix(m.cols, m.rows)


def mat_vec(m: BitMatrix, v: np.ndarray) -> np.ndarray:
    """Product ``m·v`` with ``v`` a packed column vector of length cols."""
    if v.shape[0] != m.nwords:
        raise DimensionMismatchError("vector width does not match matrix")
    if m.rows == 0:
        return vec_zeros(0)
    if m.nwords == 0:
        return vec_zeros(m.rows)
    parities = (popcount_words(m.words & v[None, :]).sum(axis=1) & 1).astype(np.uint8)
    return vec_from_indices(np.nonzero(parities)[0].tolist(), m.rows)


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Product ``a·b`` with rows of ``a`` selecting XOR-combinations of rows of ``b``."""
    if a.cols != b.rows:
        raise DimensionMismatchError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    out = BitMatrix(a.rows, b.cols)
    for i in range(a.rows):
        idx = [c for c in a.row_indices(i)]
        if idx:
            out.words[i] = np.bitwise_xor.reduce(b.words[np.asarray(idx)], axis=0)
    return out
