"""Simulated storage system with Byzantine and unresponsive servers, plus privacy audits."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator

import numpy as np

from . import gf2
from .errors import AdversaryBudgetExceeded, EnumerationTooLarge
from .params import SchemeParams
from .planning import QueryPlan
from .poly import evaluate
from .protocol import EncodedStorage, ReceivedWord
from .rm import RMCode, dual, rm_code

MODES = ("random", "always", "never")


@dataclass(frozen=True)
class SimulatedDSS:
    """Storage plus a fixed adversary for one retrieval session.

    Server indices are 0-based. A server listed as both Byzantine and
    unresponsive counts as unresponsive only.
    """

    storage: EncodedStorage
    byz: frozenset[int] = frozenset()
    unresp: frozenset[int] = frozenset()
    mode: str = "random"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"adversary mode {self.mode!r} not in {MODES}")
        n = self.storage.n
        for j in self.byz | self.unresp:
            if not 0 <= j < n:
                raise ValueError(f"server {j} outside [0, {n})")
        object.__setattr__(self, "byz", frozenset(self.byz) - frozenset(self.unresp))
        object.__setattr__(self, "unresp", frozenset(self.unresp))

    def check_budget(self, a: int, b: int) -> None:
        if len(self.unresp) > a or len(self.byz) > b:
            raise AdversaryBudgetExceeded(
                f"{len(self.unresp)} unresponsive / {len(self.byz)} Byzantine servers exceed a={a}, b={b}"
            )


def apply_adversary(dss: SimulatedDSS, honest, rng: np.random.Generator) -> ReceivedWord:
    """Erase unresponsive positions and corrupt Byzantine ones according to the mode."""
    bits = np.array(honest, dtype=np.uint8)
    for j in sorted(dss.byz):
        if dss.mode == "always" or (dss.mode == "random" and rng.integers(0, 2)):
            bits[j] ^= 1
    erased = frozenset(dss.unresp)
    for j in erased:
        bits[j] = 0
    return ReceivedWord(bits, erased)


def placements(n: int, a: int, b: int, modes: Iterable[str] = ("always", "never")) -> Iterator[tuple]:
    """Every (unresp, byz, mode) with exactly min(a, n) erasures and b disjoint Byzantine servers."""
    for unresp in combinations(range(n), a):
        rest = [j for j in range(n) if j not in unresp]
        for byz in combinations(rest, b):
            for mode in modes:
                yield frozenset(unresp), frozenset(byz), mode


def placement_count(n: int, a: int, b: int, modes: int = 2) -> int:
    from math import comb

    return comb(n, a) * comb(n - a, b) * modes


@dataclass
class StructuralCheck:
    passed: bool
    dual_distance: int
    t: int
    method: str


def structural_privacy_check(d_code: RMCode, t: int, limit: int = 18) -> StructuralCheck:
    """Any t servers see uniform queries iff the dual of D has minimum distance >= t + 1.

    The dual distance is computed by enumerating the dual when it has at most
    2^limit codewords; otherwise by the closed form 2^(r'+1), confirmed by
    the weight of a top-degree monomial of the dual.
    """
    if d_code.r == d_code.m:
        # dual is the zero code: no nonzero word, any coordinate set is free
        return StructuralCheck(True, d_code.n + 1, t, "zero dual")
    dcode = dual(d_code)
    if dcode.k <= limit:
        dist = gf2.minimum_weight(dcode.generator)
        method = "enumeration"
    else:
        dist = 1 << (d_code.r + 1)
        lowest = evaluate_monomial_weight(dcode)
        if lowest != dist:
            raise AssertionError(f"closed-form dual distance {dist} not confirmed ({lowest})")
        method = "formula"
    return StructuralCheck(dist >= t + 1, dist, t, method)


def evaluate_monomial_weight(code: RMCode) -> int:
    """Weight of the top-degree monomial of ``code`` (a minimum-weight word)."""
    from .poly import MultilinearPoly

    mask = (1 << code.r) - 1
    return int(evaluate(MultilinearPoly.monomial(code.m, mask)).sum())


def coset_restriction(word_bits: int, code: RMCode, T: Iterable[int], max_dim: int = 20) -> frozenset[int]:
    """The set {(w + d)|_T : d in code}, each restriction packed as an int (bit p = server T[p])."""
    if code.k > max_dim:
        raise EnumerationTooLarge(f"{code} has 2^{code.k} codewords")
    T = list(T)
    rows = code.generator.rows
    out = set()
    for combo in range(1 << len(rows)):
        word = word_bits
        for i in gf2.iter_bits(combo):
            word ^= rows[i]
        out.add(sum(((word >> j) & 1) << p for p, j in enumerate(T)))
    return frozenset(out)


@dataclass
class AuditEntry:
    T: tuple[int, ...]
    i1: int
    i2: int
    equal: bool
    mismatches: list[tuple[int, int, int]] = field(default_factory=list)  # (round, file, stripe)


def exact_collusion_audit(
    plan: QueryPlan, params: SchemeParams, T: Iterable[int], i1: int, i2: int, M: int
) -> AuditEntry:
    """Compare what servers T see when file i1 versus i2 is requested.

    Slot (s, mu, l) carries d or d + e; its restriction to T is uniform over a
    coset of D|_T, so the two views agree exactly when every coset set matches.
    """
    T = tuple(sorted(T))
    D = rm_code(params.r_prime, params.m)
    base = coset_restriction(0, D, T)
    mismatches = []
    for s, row in enumerate(plan.rounds):
        for mu in range(M):
            for ell, e in enumerate(row):
                e_bits = gf2.pack(evaluate(e))
                views = []
                for target in (i1, i2):
                    views.append(coset_restriction(e_bits, D, T) if mu == target else base)
                if views[0] != views[1]:
                    mismatches.append((s, mu, ell))
    return AuditEntry(T, i1, i2, not mismatches, mismatches)


@dataclass
class PrivacyAuditReport:
    structural: StructuralCheck
    entries: list[AuditEntry]

    @property
    def failing(self) -> list[AuditEntry]:
        return [e for e in self.entries if not e.equal]

    @property
    def passed(self) -> bool:
        return self.structural.passed and not self.failing


def privacy_audit(plan: QueryPlan, params: SchemeParams, M: int, size: int | None = None) -> PrivacyAuditReport:
    """Structural check plus the exact audit over every colluding set of ``size`` (default t) and file pair."""
    size = params.t if size is None else size
    structural = structural_privacy_check(rm_code(params.r_prime, params.m), params.t)
    entries = []
    for T in combinations(range(params.n), size):
        for i1, i2 in product(range(M), repeat=2):
            if i1 != i2:
                entries.append(exact_collusion_audit(plan, params, T, i1, i2, M))
    return PrivacyAuditReport(structural, entries)
