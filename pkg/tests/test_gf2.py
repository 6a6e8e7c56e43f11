"""Packed GF(2) linear algebra against the unpacked oracle."""
from __future__ import annotations

import numpy as np
import pytest

from f2coh import gf2
from f2coh._kernels import BACKEND, HAS_NUMBA, rref_core_numba, rref_core_numpy
from f2coh.errors import DimensionMismatchError

from oracles import naive_kernel, naive_rank, naive_rref, random_dense


def to_packed(dense):
    return gf2.BitMatrix.from_dense(dense)


def test_identity_rank_and_kernel():
    m = to_packed(np.eye(3, dtype=np.uint8))
    basis = gf2.rref(m)
    assert basis.rank == 3
    assert basis.pivots == (0, 1, 2)
    assert gf2.kernel(m).rank == 0


def test_dense_round_trip():
    rng = np.random.default_rng(7)
    dense = random_dense(rng, 40, 130)
    m = to_packed(dense)
    assert np.array_equal(m.to_dense(), dense)
    assert m.get(0, 0) == int(dense[0, 0])


def test_rank_matches_oracle_on_seeded_matrix():
    rng = np.random.default_rng(12345)
    dense = (rng.random((64, 80)) < 0.5).astype(np.uint8)
    assert gf2.rank(to_packed(dense)) == naive_rank(dense)


def test_rref_matches_oracle_matrix():
    rng = np.random.default_rng(99)
    for _ in range(40):
        dense = random_dense(rng, 40, 90)
        got = gf2.rref(to_packed(dense))
        want_rank, want_pivots, want_reduced = naive_rref(dense)
        assert got.rank == want_rank
        assert list(got.pivots) == want_pivots
        assert np.array_equal(got.matrix.to_dense(), want_reduced)


def test_rref_is_canonical_under_row_shuffles():
    rng = np.random.default_rng(4)
    dense = random_dense(rng, 30, 40)
    base = gf2.rref(to_packed(dense))
    for _ in range(5):
        perm = rng.permutation(dense.shape[0])
        again = gf2.rref(to_packed(dense[perm]))
        assert again == base


def test_rref_padding_bits_stay_zero():
    rng = np.random.default_rng(21)
    dense = random_dense(rng, 20, 70)  # 70 cols -> 58 pad bits in word 1
    basis = gf2.rref(to_packed(dense))
    if basis.rank:
        unpacked = np.unpackbits(
            np.ascontiguousarray(basis.matrix.words).view(np.uint8),
            axis=1, bitorder="little")
        assert not unpacked[:, 70:].any()


def test_kernel_annihilates_and_rank_nullity():
    rng = np.random.default_rng(5)
    for _ in range(25):
        dense = random_dense(rng, 30, 40)
        m = to_packed(dense)
        ker = gf2.kernel(m)
        assert ker.rank + gf2.rank(m) == m.cols
        for i in range(ker.rank):
            assert gf2.vec_is_zero(gf2.mat_vec(m, ker.matrix.row(i)))
        assert ker.rank == len(naive_kernel(dense))


def test_member_accepts_row_combinations():
    rng = np.random.default_rng(6)
    for _ in range(25):
        dense = random_dense(rng, 25, 50)
        m = to_packed(dense)
        basis = gf2.rref(m)
        picks = rng.integers(0, 2, size=dense.shape[0])
        combo = np.zeros(dense.shape[1], dtype=np.uint8)
        for r in np.nonzero(picks)[0]:
            combo ^= dense[r]
        v = gf2.vec_from_indices(np.nonzero(combo)[0].tolist(), m.cols)
        ok, coords = gf2.member(v, basis)
        assert ok
        # coordinates must recombine to v exactly
        back = gf2.vec_zeros(m.cols)
        for i in gf2.vec_to_indices(coords, basis.rank):
            back ^= basis.matrix.words[i]
        assert np.array_equal(back, v)


def test_member_rejects_outside_vectors():
    m = to_packed(np.array([[1, 0, 1, 0], [0, 1, 1, 0]], dtype=np.uint8))
    basis = gf2.rref(m)
    outside = gf2.vec_from_indices([3], 4)
    ok, coords = gf2.member(outside, basis)
    assert not ok and coords is None


def test_reduce_vector_remainder_identity():
    rng = np.random.default_rng(17)
    dense = random_dense(rng, 20, 33)
    m = to_packed(dense)
    basis = gf2.rref(m)
    v = gf2.vec_from_indices(
        np.nonzero((rng.random(33) < 0.4))[0].tolist(), 33)
    rem, coords = gf2.reduce_vector(v, basis)
    back = rem.copy()
    for i in gf2.vec_to_indices(coords, basis.rank):
        back ^= basis.matrix.words[i]
    assert np.array_equal(back, v)
    # remainder has no bits in pivot columns
    for p in basis.pivots:
        assert not (rem[p >> 6] >> np.uint64(p & 63)) & np.uint64(1)


def test_transpose_and_mat_mul_against_dense():
    rng = np.random.default_rng(8)
    a = random_dense(rng, 20, 30)
    b = random_dense(rng, 30, 25)[: a.shape[1]]
    b = np.resize(b, (a.shape[1], 25))
    pa, pb = to_packed(a), to_packed(b)
    assert np.array_equal(gf2.transpose(pa).to_dense(), a.T)
    want = (a.astype(int) @ b.astype(int)) % 2
    assert np.array_equal(gf2.mat_mul(pa, pb).to_dense(), want.astype(np.uint8))


def test_empty_shapes_are_safe():
    empty_rows = gf2.BitMatrix(0, 5)
    assert gf2.rref(empty_rows).rank == 0
    assert gf2.kernel(empty_rows).rank == 5
    empty_cols = gf2.BitMatrix(4, 0)
    assert gf2.rank(empty_cols) == 0
    assert gf2.kernel(empty_cols).rank == 0


def test_width_mismatch_raises():
    basis = gf2.rref(to_packed(np.eye(4, dtype=np.uint8)))
    with pytest.raises(DimensionMismatchError):
        gf2.member(gf2.vec_zeros(100), basis)
    with pytest.raises(DimensionMismatchError):
        gf2.mat_mul(gf2.BitMatrix(2, 3), gf2.BitMatrix(4, 2))


def test_dump_format():
    m = to_packed(np.array([[1, 0, 1], [0, 1, 0]], dtype=np.uint8))
    assert m.dump() == "101\n010"


def test_vec_round_trip():
    v = gf2.vec_from_indices([0, 63, 64, 129], 130)
    assert gf2.vec_to_indices(v, 130) == (0, 63, 64, 129)


def test_backends_agree_bit_for_bit():
    if not HAS_NUMBA:
        pytest.skip("numba backend disabled")
    rng = np.random.default_rng(100)
    for _ in range(30):
        dense = random_dense(rng, 60, 150)
        m = to_packed(dense)
        w1 = np.ascontiguousarray(m.words.copy())
        w2 = np.ascontiguousarray(m.words.copy())
        r1, p1 = rref_core_numba(w1, m.cols, m.cols)
        r2, p2 = rref_core_numpy(w2, m.cols, m.cols)
        assert r1 == r2
        assert np.array_equal(p1, p2)
        assert np.array_equal(w1, w2)


def test_backend_flag_reported():
    assert BACKEND in ("numba", "numpy")
