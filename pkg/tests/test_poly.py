import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import poly_eval_direct
from rmpir.errors import MismatchedVariableCount
from rmpir.poly import NEG_INF, MultilinearPoly, evaluate, monomial_name, monomials, zeta_transform


def polys(m):
    return st.frozensets(st.integers(0, (1 << m) - 1), max_size=1 << m).map(lambda t: MultilinearPoly(m, t))


def test_monomial_order():
    assert monomials(3, 2) == [0, 1, 2, 4, 3, 5, 6]
    assert monomials(4, 2, 2) == [3, 5, 6, 9, 10, 12]
    assert [monomial_name(t) for t in monomials(3, 3, 3)] == ["z1z2z3"]
    assert monomial_name(0) == "1"


def test_point_convention():
    # point P_j is j-1 in binary with z1 as the low bit
    z1 = MultilinearPoly.var(3, 1)
    z3 = MultilinearPoly.var(3, 3)
    assert list(evaluate(z1)) == [0, 1, 0, 1, 0, 1, 0, 1]
    assert list(evaluate(z3)) == [0, 0, 0, 0, 1, 1, 1, 1]


def test_degree_and_zero():
    assert MultilinearPoly.zero(3).degree == NEG_INF
    assert MultilinearPoly.one(3).degree == 0
    p = MultilinearPoly.from_terms(4, [0b11, 0b1000, 0b11])
    assert p.terms == {0b1000} and p.degree == 1


def test_square_is_idempotent():
    z2 = MultilinearPoly.var(3, 2)
    assert z2 * z2 == z2


def test_variable_count_mismatch():
    with pytest.raises(MismatchedVariableCount):
        MultilinearPoly.var(3, 1) + MultilinearPoly.var(4, 1)
    with pytest.raises(MismatchedVariableCount):
        MultilinearPoly.var(3, 4)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 5).flatmap(polys))
def test_evaluate_matches_direct_sum(p):
    assert np.array_equal(evaluate(p), poly_eval_direct(p.m, p.terms))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 5).flatmap(lambda m: st.tuples(polys(m), polys(m))))
def test_product_evaluates_pointwise(pq):
    p, q = pq
    assert np.array_equal(evaluate(p * q), evaluate(p) & evaluate(q))
    assert np.array_equal(evaluate(p + q), evaluate(p) ^ evaluate(q))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 5).flatmap(polys))
def test_interpolate_inverts_evaluate(p):
    assert MultilinearPoly.interpolate(evaluate(p)) == p
    assert all(p.at(j) == v for j, v in enumerate(evaluate(p)))


def test_zeta_is_involution():
    rng = np.random.default_rng(0)
    v = rng.integers(0, 2, 32, dtype=np.uint8)
    assert np.array_equal(zeta_transform(zeta_transform(v, 5), 5), v)


def test_restrict_and_str():
    p = MultilinearPoly.from_terms(3, [0, 1, 3, 7])
    assert str(p) == "1 + z1 + z1z2 + z1z2z3"
    assert p.restrict_degree(1, 2).terms == {1, 3}
    assert p.coefficient(7) == 1 and p.coefficient(2) == 0
