
import numpy as np
import pytest

from rmpir.dss import (
    SimulatedDSS,
    apply_adversary,
    coset_restriction,
    exact_collusion_audit,
    placement_count,
    placements,
    privacy_audit,
    structural_privacy_check,
)
from rmpir.errors import AdversaryBudgetExceeded, EnumerationTooLarge
from rmpir.params import derive_params
from rmpir.planning import reference_plan
from rmpir.protocol import FileSystem, encode_storage
from rmpir.rm import rm_code

EX1 = derive_params(1, 1, 1, 1)
PLAN1 = reference_plan(EX1)


@pytest.fixture(scope="module")
def storage():
    X = FileSystem.random(3, EX1, np.random.default_rng(0))
    return encode_storage(X, EX1)


def test_no_adversary_leaves_responses(storage):
    honest = np.arange(16, dtype=np.uint8) & 1
    got = apply_adversary(SimulatedDSS(storage), honest, np.random.default_rng(0))
    assert np.array_equal(got.bits, honest) and not got.erased


def test_always_flip_flips_exactly_one(storage):
    honest = np.zeros(16, dtype=np.uint8)
    got = apply_adversary(SimulatedDSS(storage, frozenset({4}), mode="always"), honest, np.random.default_rng(0))
    assert list(np.flatnonzero(got.bits)) == [4]


def test_unresponsive_wins_overlap(storage):
    dss = SimulatedDSS(storage, frozenset({2, 3}), frozenset({3}), "always")
    assert dss.byz == {2} and dss.unresp == {3}
    got = apply_adversary(dss, np.zeros(16, dtype=np.uint8), np.random.default_rng(0))
    assert got.erased == {3} and got.bits[2] == 1


def test_budget_check(storage):
    SimulatedDSS(storage, frozenset({1}), frozenset({2})).check_budget(1, 1)
    with pytest.raises(AdversaryBudgetExceeded):
        SimulatedDSS(storage, frozenset({0, 1})).check_budget(1, 1)
    with pytest.raises(ValueError):
        SimulatedDSS(storage, mode="sometimes")


def test_random_mode_is_seeded(storage):
    dss = SimulatedDSS(storage, frozenset({0, 5, 9}), mode="random")
    honest = np.zeros(16, dtype=np.uint8)
    runs = [apply_adversary(dss, honest, np.random.default_rng(42)).bits for _ in range(2)]
    assert np.array_equal(*runs)
    assert set(np.flatnonzero(runs[0])) <= {0, 5, 9}


def test_placement_enumeration_count():
    listed = list(placements(16, 1, 1))
    assert len(listed) == placement_count(16, 1, 1) == 480
    assert len(set(listed)) == 480
    assert all(not (u & b) for u, b, _ in listed)


def test_structural_examples():
    assert structural_privacy_check(rm_code(0, 4), 1).passed
    fail = structural_privacy_check(rm_code(0, 4), 2)
    assert not fail.passed and fail.dual_distance == 2
    high = structural_privacy_check(rm_code(1, 4), 3)
    assert high.passed and high.dual_distance == 4


def test_structural_formula_path():
    res = structural_privacy_check(rm_code(1, 6), 3, limit=10)
    assert res.method == "formula" and res.dual_distance == 4


def test_singleton_audit_reference():
    for j in range(EX1.n):
        for i1, i2 in [(0, 1), (1, 2), (2, 0)]:
            assert exact_collusion_audit(PLAN1, EX1, [j], i1, i2, 3).equal


def test_full_collusion_sees_everything():
    entry = exact_collusion_audit(PLAN1, EX1, range(EX1.n), 0, 1, 3)
    assert not entry.equal and entry.mismatches


def test_structural_pass_implies_exact_pass():
    report = privacy_audit(PLAN1, EX1, 3)
    assert report.structural.passed
    assert report.passed and len(report.entries) == 16 * 6


def test_pairs_beyond_t_can_leak():
    # two servers differing in z1 see e = z1 as different values: D = constants cannot hide that
    entry = exact_collusion_audit(PLAN1, EX1, (0, 1), 0, 1, 3)
    assert not entry.equal


def test_enumeration_limit():
    with pytest.raises(EnumerationTooLarge):
        coset_restriction(0, rm_code(2, 6), [0, 1], max_dim=20)
    assert len(coset_restriction(0, rm_code(1, 3), [0, 1, 2])) == 8
