"""Self-check harness behind ``rmpir verify``: named invariants, each run against an independent oracle."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

import numpy as np

from . import gf2
from .dss import SimulatedDSS, placements, privacy_audit
from .params import derive_params
from .planning import reference_plan, recovery_table, validate_plan
from .poly import evaluate
from .protocol import FileSystem, encode_storage, retrieve
from .rates import rate_rm, rate_rs
from .rm import RMCode, decode, dual, rm_code, star_product_span

# Round in which each reference-instance coefficient is recovered (rows = stripes, columns = 1, z1..z4).
REFERENCE_TABLE = np.array([[5, 2, 2, 2, 1]] * 3 + [[5, 4, 4, 4, 3]] * 3)


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0


class Verifier:
    """Runs named checks; ``dual_fn`` is injectable so the harness itself can be tested."""

    def __init__(self, level: str = "quick", dual_fn: Callable[[RMCode], RMCode] = dual, seed: int = 0):
        if level not in ("quick", "full"):
            raise ValueError(f"unknown level {level!r}")
        self.level = level
        self.dual_fn = dual_fn
        self.seed = seed
        self.max_m = 4 if level == "quick" else 5

    def checks(self) -> list[tuple[str, Callable[[], str | None]]]:
        return [
            ("Lemma1.dimension", self.lemma1_dimension),
            ("Lemma1.distance", self.lemma1_distance),
            ("Lemma1.dual", self.lemma1_dual),
            ("Lemma1.star", self.lemma1_star),
            ("decoder.exhaustive", self.decoder_exhaustive),
            ("privacy.audit", self.privacy),
            ("reference.plan", self.check_reference_plan),
            ("reference.retrieval", self.check_reference_retrieval),
            ("rates.reference", self.check_reference_rates),
        ]

    def run(self) -> list[CheckResult]:
        results = []
        for name, fn in self.checks():
            start = time.perf_counter()
            try:
                problem = fn()
            except Exception as exc:  # a crash is a failure of that invariant
                problem = f"{type(exc).__name__}: {exc}"
            results.append(CheckResult(name, problem is None, problem or "", time.perf_counter() - start))
        return results

    def _codes(self):
        for m in range(self.max_m + 1):
            for r in range(m + 1):
                yield rm_code(r, m)

    def lemma1_dimension(self):
        for code in self._codes():
            expected = sum(comb(code.m, i) for i in range(code.r + 1))
            if gf2.rank(code.generator) != expected:
                return f"{code}: rank {gf2.rank(code.generator)} != {expected}"
        return None

    def lemma1_distance(self):
        for code in self._codes():
            if code.k <= 18:
                w = gf2.minimum_weight(code.generator)
                if w != 1 << (code.m - code.r):
                    return f"{code}: minimum weight {w} != {1 << (code.m - code.r)}"
        return None

    def lemma1_dual(self):
        for code in self._codes():
            if code.r == code.m:
                continue
            claimed = self.dual_fn(code)
            null = gf2.null_space(code.generator)
            if not gf2.same_row_space(claimed.generator, null):
                return f"dual of {code}: {claimed} does not span the null space"
        return None

    def lemma1_star(self):
        for m in range(self.max_m + 1):
            for r in range(m + 1):
                for rp in range(m - r + 1):
                    span = star_product_span(rm_code(r, m), rm_code(rp, m))
                    if not gf2.same_row_space(span, rm_code(r + rp, m).generator):
                        return f"RM({r},{m}) * RM({rp},{m}) != RM({r + rp},{m})"
        return None

    def decoder_exhaustive(self):
        code = rm_code(2, 4)
        rng = np.random.default_rng(self.seed)
        words = 10 if self.level == "quick" else 100
        for _ in range(words):
            p = code.poly(rng.integers(0, 2, code.k))
            c = evaluate(p)
            for flip in [None, *range(code.n)]:
                for erase in [None, *range(code.n)]:
                    if flip is not None and flip == erase:
                        continue
                    w = c.copy()
                    if flip is not None:
                        w[flip] ^= 1
                    erased = () if erase is None else (erase,)
                    got = decode(w, code, erased, 1)
                    if got != p:
                        return f"flip {flip}, erase {erase}: decoded {got} instead of {p}"
        return None

    def privacy(self):
        params = derive_params(1, 1, 1, 1)
        report = privacy_audit(reference_plan(params), params, 3)
        if not report.structural.passed:
            return f"dual distance {report.structural.dual_distance} < t+1"
        if report.failing:
            return f"{len(report.failing)} colluding sets see different queries"
        return None

    def check_reference_plan(self):
        params = derive_params(1, 1, 1, 1)
        plan = reference_plan(params)
        report = validate_plan(plan, params)
        if not report:
            return "; ".join(report.violations)
        if not np.array_equal(recovery_table(plan, params), REFERENCE_TABLE):
            return "recovery rounds differ from the expected table"
        if not validate_plan(plan.swapped(0, 4), params).has("gamma-knowability"):
            return "reordered plan not rejected for knowability"
        return None

    def check_reference_retrieval(self):
        params = derive_params(1, 1, 1, 1)
        plan = reference_plan(params)
        rng = np.random.default_rng(self.seed)
        X = FileSystem.random(3, params, rng)
        storage = encode_storage(X, params)
        cases = list(placements(params.n, params.a, params.b))
        if self.level == "quick":
            cases = cases[:: len(cases) // 16]
        for i in range(X.M):
            for unresp, byz, mode in cases:
                got, transcript = retrieve(i, SimulatedDSS(storage, byz, unresp, mode), params, plan, rng)
                if not np.array_equal(got, X.data[i]):
                    return f"file {i + 1} wrong with byz={sorted(byz)} unresp={sorted(unresp)} {mode}"
                if transcript.rate != rate_rm(params):
                    return f"rate {transcript.rate} != {rate_rm(params)}"
        return None

    def check_reference_rates(self):
        params = derive_params(1, 1, 1, 1)
        got = (rate_rm(params), rate_rs(16, 5, 1, 1, 1))
        if got != (Fraction(3, 8), Fraction(1, 2)):
            return f"rates {got} != (3/8, 1/2)"
        return None


def run(level: str = "quick", dual_fn: Callable[[RMCode], RMCode] = dual, seed: int = 0) -> list[CheckResult]:
    return Verifier(level, dual_fn, seed).run()
