"""Packed-word GF(2) elimination kernels.

Matrices over GF(2) are stored 64 columns per ``uint64`` word.  Row
reduction is the single hot loop everything else in the package funnels
through, so it comes in two interchangeable flavours:

* a ``numba``-jitted version with explicit loops (default), and
* a vectorised pure-numpy fallback.

Setting the environment variable ``F2COH_NO_NUMBA`` to a non-empty value
before import forces the numpy path; so does an unavailable numba.  Both
paths produce bit-identical output (same pivot choices, same reduced
matrix), which the test suite checks.  ``benchmarks/bench_gf2.py``
compares their throughput.
"""
from __future__ import annotations

import os

import numpy as np

WORD = 64
_ONE = np.uint64(1)


def rref_core_numpy(words: np.ndarray, ncols: int, pivot_limit: int) -> tuple[int, np.ndarray]:
    """Reduce ``words`` to reduced row-echelon form in place.

    Pivots are searched only among the first ``pivot_limit`` columns;
    trailing columns are carried along (used for augmented solves).

    Args:
        words: uint64 array of shape (nrows, nwords), 64 columns per word.
        ncols: true column count (trailing pad bits must be zero).
        pivot_limit: exclusive upper bound on pivot column indices.

    Returns:
        (rank, pivot column indices as an int64 array).
    """
    nrows = words.shape[0]
    cap = nrows if nrows < pivot_limit else pivot_limit
    pivots = np.empty(cap, np.int64)
    rank = 0
    for col in range(pivot_limit):
        if rank == nrows:
            break
        w = col >> 6
        b = np.uint64(col & 63)
        hits = np.nonzero((words[rank:, w] >> b) & _ONE)[0]
        if hits.size == 0:
            continue
        piv = rank + int(hits[0])
        if piv != rank:
            tmp = words[piv].copy()
            words[piv] = words[rank]
            words[rank] = tmp
        mask = ((words[:, w] >> b) & _ONE).astype(bool)
        mask[rank] = False
        if mask.any():
            words[mask] ^= words[rank]
        pivots[rank] = col
        rank += 1
    return rank, pivots[:rank]


def _rref_core_plain(words, ncols, pivot_limit):
    # Loop-style twin of rref_core_numpy; written to be numba-friendly.
    nrows, nwords = words.shape
    cap = nrows if nrows < pivot_limit else pivot_limit
    pivots = np.empty(cap, np.int64)
    rank = 0
    for col in range(pivot_limit):
        if rank == nrows:
            break
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        piv = -1
        for r in range(rank, nrows):
            if words[r, w] & bit:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(nwords):
                tmp = words[piv, k]
                words[piv, k] = words[rank, k]
                words[rank, k] = tmp
        for r in range(nrows):
            if r != rank and (words[r, w] & bit):
                # pivot row has no bits before its pivot column
                for k in range(w, nwords):
                    words[r, k] ^= words[rank, k]
        pivots[rank] = col
        rank += 1
    return rank, pivots[:rank]


def _want_numba() -> bool:
    if os.environ.get("F2COH_NO_NUMBA"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


HAS_NUMBA = _want_numba()

if HAS_NUMBA:
    from numba import njit

    rref_core_numba = njit("Tuple((int64, int64[:]))(uint64[:, ::1], int64, int64)",
                           cache=True, nogil=True)(_rref_core_plain)
    rref_core = rref_core_numba
    BACKEND = "numba"
else:
    rref_core_numba = None
    rref_core = rref_core_numpy
    BACKEND = "numpy"


def popcount_words(words: np.ndarray) -> np.ndarray:
    """Per-element population count for uint64 arrays."""
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(words)
    flat = np.ascontiguousarray(words).reshape(-1)
    counts = np.unpackbits(flat.view(np.uint8)).reshape(flat.size, WORD).sum(axis=1)
    return counts.reshape(words.shape)
