import numpy as np
import pytest

from rmpir.errors import PlanNotFound
from rmpir.params import SchemeParams, derive_params
from rmpir.planning import (
    QueryPlan,
    reference_plan,
    greedy_plan,
    plan_queries,
    product_functionals,
    recovery_table,
    validate_plan,
)
from rmpir.poly import MultilinearPoly

EX1 = derive_params(1, 1, 1, 1)


def test_reference_plan_valid_and_table():
    plan = reference_plan(EX1)
    report = validate_plan(plan, EX1)
    assert report.valid, report.violations
    assert report.rank == 30
    expected = np.array([[5, 2, 2, 2, 1]] * 3 + [[5, 4, 4, 4, 3]] * 3)
    assert np.array_equal(recovery_table(plan, EX1), expected)


def test_reference_round_one_symbols():
    report = validate_plan(reference_plan(EX1), EX1)
    # a^l_4 of stripes 1-3: coefficient 4 (z4) of each stripe
    assert report.rounds[0].new_symbols == [4, 9, 14]
    assert report.rounds[4].high_terms  # degree-3 terms subtracted in round 5
    assert report.rounds[4].knowable


def test_swapped_plan_fails_knowability():
    report = validate_plan(reference_plan(EX1).swapped(0, 4), EX1)
    assert not report.valid
    assert report.has("gamma-knowability")
    assert "z1z2z3" in report.violations[0]


def test_empty_plan_invalid():
    report = validate_plan(QueryPlan(()), EX1)
    assert not report.valid and report.rank == 0
    assert report.has("completeness") and report.has("round count")


def test_degree_range_violation():
    rounds = list(reference_plan(EX1).rounds)
    rounds[0] = (MultilinearPoly.one(4),) + rounds[0][1:]
    assert validate_plan(QueryPlan(tuple(rounds)), EX1).has("degree range")


def test_product_functionals_reference_round1():
    funcs = product_functionals(reference_plan(EX1).rounds[0], EX1)
    # z1z2 collects a^1_2 (stripe 0, z2 -> index 2) and a^2_1 (stripe 1, z1 -> index 1)
    assert funcs[0b11] == (1 << 2) | (1 << (5 + 1))
    assert funcs[0b1000 | 0b1] == 1 << 4


def test_plan_queries_reference_uses_hand_plan():
    assert plan_queries(EX1).name == "reference"


@pytest.mark.parametrize("args", [(0, 1, 1, 0), (0, 1, 0, 1), (1, 1, 2, 1), (0, 3, 3, 0)])
def test_search_planner_returns_valid_plans(args):
    params = derive_params(*args)
    plan = plan_queries(params)
    assert validate_plan(plan, params).valid


def test_single_round_when_rho_equals_k():
    params = derive_params(0, 1, 1, 0)  # k = 1, rho = 2: L = 2, S = 1
    assert params.S == 1
    assert len(plan_queries(params)) == 1


def test_plan_not_found_carries_rank():
    params = SchemeParams.build(1, 4, 1, 1, 1, 1, 1)  # empty band
    with pytest.raises(PlanNotFound) as info:
        plan_queries(params)
    assert info.value.rank == 0 and info.value.target == 0


def test_greedy_plan_reference_family():
    params = derive_params(0, 1, 1, 0)
    assert validate_plan(greedy_plan(params), params).valid
