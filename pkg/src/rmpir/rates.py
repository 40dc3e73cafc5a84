"""Exact PIR rates: the RM scheme, the robust GRS scheme and the conjectured capacity."""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb
from typing import Iterable

from .params import SchemeParams, ceil_log2, params_for_length

CSV_COLUMNS = ["n", "m", "r", "k", "t", "a", "b", "rate_rm_num", "rate_rm_den", "rate_rm", "rate_rs", "capacity", "feasible"]


def rate_rm(params: SchemeParams) -> Fraction:
    """sum_{i=r'+1}^{r_e} C(m, r+i) / 2^m; zero when the sum is empty."""
    total = sum(comb(params.m, params.r + i) for i in range(params.r_prime + 1, params.r_e + 1))
    return Fraction(total, params.n)


def rate_rs(n: int, k: int, t: int, a: int, b: int) -> Fraction:
    """(n - k - t - 2b - a + 1) / n, possibly non-positive."""
    return Fraction(n - k - t - 2 * b - a + 1, n)


def capacity_conjectured(n: int, k: int, t: int, a: int, b: int) -> Fraction:
    """(n - (k + t + a + 2b - 1)) / n."""
    return Fraction(n - (k + t + a + 2 * b - 1), n)


def rm_rate_conditions(params: SchemeParams) -> list[str]:
    """Conditions a sweep point must meet for its RM rate to be meaningful."""
    keep = ("storage order", "collusion", "error correction", "projection")
    return [v for v in params.violations() if v.startswith(keep)]


@dataclass(frozen=True)
class RatePoint:
    n: int
    m: int
    r: int
    k: int
    t: int
    a: int
    b: int
    rate_rm: Fraction
    rate_rs: Fraction
    capacity: Fraction
    feasible: bool

    @classmethod
    def at(cls, m: int, r: int, t: int, a: int, b: int) -> "RatePoint":
        p = params_for_length(m, r, t, a, b)
        rs = rate_rs(p.n, p.k, t, a, b)
        cap = capacity_conjectured(p.n, p.k, t, a, b)
        ok = not rm_rate_conditions(p) and rs > 0
        return cls(p.n, m, r, p.k, t, a, b, rate_rm(p), rs, cap, ok)

    def row(self) -> list:
        return [
            self.n, self.m, self.r, self.k, self.t, self.a, self.b,
            self.rate_rm.numerator, self.rate_rm.denominator,
            f"{float(self.rate_rm):.6f}", f"{float(self.rate_rs):.6f}", f"{float(self.capacity):.6f}",
            int(self.feasible),
        ]


def half_rate_order(m: int) -> int:
    """Storage order r whose RM(r, m) code rate is nearest 1/2, ties to the lower r."""
    n = 1 << m
    return min(range(m + 1), key=lambda r: (abs(Fraction(sum(comb(m, i) for i in range(r + 1)), n) - Fraction(1, 2)), r))


def sweep(ms: Iterable[int], rs: Iterable[int] | None, ts: Iterable[int], as_: Iterable[int], bs: Iterable[int]) -> list[RatePoint]:
    """One point per combination. ``rs=None`` picks the code-rate-1/2 order for each m."""
    points = []
    ts, as_, bs = list(ts), list(as_), list(bs)
    for m in ms:
        orders = [half_rate_order(m)] if rs is None else [r for r in rs if 0 <= r <= m]
        for r, t, a, b in product(orders, ts, as_, bs):
            points.append(RatePoint.at(m, r, t, a, b))
    return points


PANELS = {
    # fixed code rate 1/2, growing length, t = a = 1
    "left": dict(ms=range(3, 11), rs=None, ts=[1], as_=[1], bs=[0, 1, 2, 3]),
    # n = 64, t = a = 1, storage order varies
    "middle": dict(ms=[6], rs=range(0, 7), ts=[1], as_=[1], bs=[0, 1, 2, 3]),
    # n = 128, b = 3, a = 1, collusion varies
    "right": dict(ms=[7], rs=range(0, 8), ts=[1, 3, 7], as_=[1], bs=[3]),
}


def panel(name: str) -> list[RatePoint]:
    return sweep(**PANELS[name])


def _parse_range(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split("|") if v.strip()]


def parse_custom(text: str) -> list[RatePoint]:
    """Sweep from ``key=values`` pairs, e.g. ``n=16,t=1,a=1,b=0..3`` or ``m=4..6,r=1,t=1|3``.

    Keys: n (power of two) or m, r (default: code rate 1/2), t, a, b
    (defaults 1, 0, 0). Values are an int, ``lo..hi`` (inclusive) or
    ``v1|v2``. An empty range yields no points.
    """
    fields: dict[str, list[int]] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        match = re.fullmatch(r"(\w+)\s*=\s*(.*)", part)
        if not match or match.group(1) not in {"n", "m", "r", "t", "a", "b"}:
            raise ValueError(f"bad sweep term {part!r}")
        fields[match.group(1)] = _parse_range(match.group(2))
    if "n" in fields:
        ms = []
        for n in fields.pop("n"):
            if n < 1 or n & (n - 1):
                raise ValueError(f"n={n} is not a power of two")
            ms.append(ceil_log2(n))
        fields["m"] = ms
    return sweep(
        fields.get("m", []),
        fields.get("r"),
        fields.get("t", [1]),
        fields.get("a", [0]),
        fields.get("b", [0]),
    )


def to_csv(points: Iterable[RatePoint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for p in points:
        writer.writerow(p.row())
    return buf.getvalue()


def capacity_violations(points: Iterable[RatePoint]) -> list[RatePoint]:
    """Feasible points whose RM rate exceeds the conjectured capacity (reported, not asserted)."""
    return [p for p in points if p.feasible and p.rate_rm > p.capacity]
