from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import rank_by_enumeration, solve_by_enumeration
from rmpir import gf2
from rmpir.errors import DimensionMismatch, NoSolution, RankDeficient, Singular
from rmpir.gf2 import BitMatrix, XorBasis


def bit_arrays(max_rows=6, max_cols=8):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_pack_unpack_roundtrip():
    bits = np.array([1, 0, 1, 1, 0, 0, 1], dtype=np.uint8)
    assert gf2.pack(bits) == 0b1001101
    assert np.array_equal(gf2.unpack(gf2.pack(bits), 7), bits)
    with pytest.raises(DimensionMismatch):
        gf2.unpack(0b1000, 3)


def test_iter_bits_and_parity():
    assert list(gf2.iter_bits(0b101001)) == [0, 3, 5]
    assert gf2.parity(0b111) == 1 and gf2.parity(0b11) == 0


def test_bitmatrix_basics():
    A = BitMatrix.from_array([[1, 0, 1], [0, 1, 1]])
    assert A.shape == (2, 3)
    assert A[0, 2] == 1 and A[1, 0] == 0
    assert np.array_equal(A.T.to_array(), A.to_array().T)
    assert np.array_equal(A.mul_vec([1, 1, 0]), [1, 1])
    with pytest.raises(DimensionMismatch):
        BitMatrix([0b1000], 3)


@settings(max_examples=60, deadline=None)
@given(bit_arrays(), bit_arrays())
def test_matmul_matches_numpy(a, b):
    A = np.array(a, dtype=np.int64)
    B = np.array(b, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        B = np.resize(B, (A.shape[1], B.shape[1]))
    got = (BitMatrix.from_array(A) @ BitMatrix.from_array(B)).to_array()
    assert np.array_equal(got, (A @ B) & 1)


@settings(max_examples=80, deadline=None)
@given(bit_arrays())
def test_rank_matches_enumeration(a):
    A = np.array(a, dtype=np.uint8)
    assert gf2.rank(BitMatrix.from_array(A)) == rank_by_enumeration(A)


@settings(max_examples=60, deadline=None)
@given(bit_arrays())
def test_null_space_is_complement(a):
    A = np.array(a, dtype=np.uint8)
    M = BitMatrix.from_array(A)
    N = gf2.null_space(M)
    assert N.nrows == M.ncols - gf2.rank(M)
    if N.nrows:
        assert (M @ N.T).is_zero()
        assert gf2.rank(N) == N.nrows


def test_solve_exhaustive_8x8():
    # every right-hand side against a fixed mix of full-rank and singular systems
    rng = np.random.default_rng(7)
    for _ in range(6):
        A = rng.integers(0, 2, size=(8, 8), dtype=np.uint8)
        M = BitMatrix.from_array(A)
        for b in product((0, 1), repeat=8):
            b = np.array(b, dtype=np.uint8)
            sols = solve_by_enumeration(A, b)
            if sols:
                x = gf2.solve(M, b)
                assert np.array_equal((A.astype(np.int64) @ x) & 1, b)
            else:
                with pytest.raises(NoSolution):
                    gf2.solve(M, b)


def test_solve_free_variables_zero():
    M = BitMatrix.from_array([[1, 1, 0], [0, 0, 1]])
    assert np.array_equal(gf2.solve(M, [1, 1]), [1, 0, 1])


def test_information_set_and_inverse():
    G = BitMatrix.from_array([[1, 1, 0, 1], [0, 1, 1, 1]])
    cols = gf2.find_information_set(G)
    assert cols == (0, 1)
    inv = gf2.invert_on_columns(G, cols)
    assert (inv @ G.select_columns(cols)) == BitMatrix.identity(2)
    with pytest.raises(Singular):
        gf2.invert_on_columns(BitMatrix.from_array([[1, 1], [1, 1]]), (0, 1))
    with pytest.raises(RankDeficient):
        gf2.find_information_set(BitMatrix.from_array([[1, 0], [1, 0]]))


def test_extend_information_set_keeps_start():
    G = BitMatrix.from_array([[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]])
    cols = gf2.extend_information_set(G, [3])
    assert 3 in cols and len(cols) == 3
    gf2.invert_on_columns(G, cols)


def test_minimum_weight_and_span():
    G = BitMatrix.from_array([[1, 1, 1, 0], [0, 1, 1, 1]])
    assert sorted(w.bit_count() for w in gf2.span_words(G)) == [0, 2, 3, 3]
    assert gf2.minimum_weight(G) == 2
    assert gf2.minimum_weight(BitMatrix.zeros(2, 3)) is None


def test_xor_basis_payloads_solve_systems():
    basis = XorBasis()
    assert basis.add(0b011, 1)
    assert basis.add(0b110, 0)
    assert not basis.add(0b101, 1)
    assert basis.value_of(0b101) == 1
    assert basis.value_of(0b001) is None
    assert len(basis) == 2
    clone = basis.copy()
    clone.add(0b001, 1)
    assert len(basis) == 2 and len(clone) == 3
    # x0 + x1 = 1, x1 + x2 = 0, x0 = 1  ->  x = (1, 0, 0)
    assert [clone.value_of(1 << i) for i in range(3)] == [1, 0, 0]


def test_same_row_space_and_membership():
    A = BitMatrix.from_array([[1, 1, 0], [0, 1, 1]])
    B = BitMatrix.from_array([[1, 0, 1], [1, 1, 0]])
    assert gf2.same_row_space(A, B)
    assert gf2.in_row_space([1, 0, 1], A)
    assert not gf2.in_row_space([1, 0, 0], A)
