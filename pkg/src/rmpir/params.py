"""Parameter derivation and feasibility for the robust RM PIR scheme."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, lcm

from .errors import Infeasible


def ceil_log2(x: int) -> int:
    """Exact ceil(log2(x)) for a positive integer."""
    if x < 1:
        raise ValueError(f"log2 of non-positive {x}")
    return (x - 1).bit_length()


@dataclass(frozen=True)
class SchemeParams:
    """All protocol parameters.

    ``r`` storage order, ``m`` variables (n = 2^m servers), ``r_prime``
    retrieval order, ``r_e`` the largest degree a query needs to reach the
    decodable band, ``t, a, b`` collusion / erasure / Byzantine budgets.
    ``rho`` symbols come back per round, a file has ``L`` stripes of ``k``
    symbols and retrieval takes ``S`` rounds.
    """

    r: int
    m: int
    r_prime: int
    r_e: int
    t: int
    a: int
    b: int
    n: int
    k: int
    rho: int
    L: int
    S: int

    @classmethod
    def build(cls, r: int, m: int, r_prime: int, r_e: int, t: int, a: int, b: int) -> "SchemeParams":
        """Fill in the derived fields without checking feasibility."""
        k = sum(comb(m, i) for i in range(r + 1)) if 0 <= r <= m else 0
        rho = sum(comb(m, r + i) for i in range(r_prime + 1, r_e + 1))
        if rho > 0 and k > 0:
            common = lcm(rho, k)
            L, S = common // k, common // rho
        else:
            L = S = 0
        return cls(r=r, m=m, r_prime=r_prime, r_e=r_e, t=t, a=a, b=b, n=1 << m, k=k, rho=rho, L=L, S=S)

    @property
    def correction_budget(self) -> int:
        """a + 2b + 1, the distance the response code must reach."""
        return self.a + 2 * self.b + 1

    @property
    def decode_order(self) -> int:
        """Order of the RM code responses are decoded in."""
        return self.r + self.r_e

    @property
    def band(self) -> tuple[int, int]:
        """Degree range [r + r' + 1, r + r_e] of recoverable response terms."""
        return self.r + self.r_prime + 1, self.r + self.r_e

    def violations(self) -> list[str]:
        out = []
        if not 0 <= self.r <= self.m:
            out.append(f"storage order: need 0 <= r={self.r} <= m={self.m}")
        if self.r_prime < 0:
            out.append(f"retrieval order: r'={self.r_prime} is negative")
        if self.t < 1 or self.a < 0 or self.b < 0:
            out.append("budgets: need t >= 1, a >= 0, b >= 0")
        if (1 << (self.r_prime + 1)) - 1 < self.t:
            out.append(f"collusion: 2^(r'+1) - 1 = {(1 << (self.r_prime + 1)) - 1} < t={self.t}")
        slack = self.m - self.r - self.r_e
        if slack < 0 or (1 << slack) < self.correction_budget:
            out.append(
                f"error correction: 2^(m-r-r_e) = 2^{slack} < a+2b+1 = {self.correction_budget}"
            )
        if self.r_e < self.r_prime + 1:
            out.append(f"projection: r_e={self.r_e} < r'+1={self.r_prime + 1}")
        head = self.m - self.r
        if head < 0 or (1 << head) < (self.t + 1) * self.correction_budget:
            out.append(
                f"server count: 2^(m-r) = 2^{head} < (t+1)(a+2b+1) = "
                f"{(self.t + 1) * self.correction_budget}"
            )
        if self.r + self.r_e > self.m - self.r - self.r_prime - 1:
            out.append(
                f"decodability: r+r_e = {self.r + self.r_e} > m-r-r'-1 = "
                f"{self.m - self.r - self.r_prime - 1}"
            )
        return out

    @property
    def feasible(self) -> bool:
        return not self.violations()

    def summary(self) -> str:
        return (
            f"r={self.r} m={self.m} n={self.n} k={self.k} r'={self.r_prime} r_e={self.r_e} "
            f"t={self.t} a={self.a} b={self.b} rho={self.rho} L={self.L} S={self.S}"
        )


def derive_params(r: int, t: int, a: int, b: int) -> SchemeParams:
    """Smallest-m parameters for a (t, a, b)-robust scheme with storage order r.

    m = r + ceil(log2((t+1)(a+2b+1))), r' = max(0, ceil(log2(t+1)) - 1),
    r_e = m - r - ceil(log2(a+2b+1)).

    Raises:
        Infeasible: naming each inequality that fails.
    """
    if t < 1 or a < 0 or b < 0 or r < 0:
        raise Infeasible([f"budgets: need t >= 1, a, b, r >= 0 (got t={t}, a={a}, b={b}, r={r})"])
    budget = a + 2 * b + 1
    m = r + ceil_log2((t + 1) * budget)
    r_prime = max(0, ceil_log2(t + 1) - 1)
    r_e = m - r - ceil_log2(budget)
    params = SchemeParams.build(r, m, r_prime, r_e, t, a, b)
    problems = params.violations()
    if problems:
        raise Infeasible(problems)
    return params


def params_for_length(m: int, r: int, t: int, a: int, b: int) -> SchemeParams:
    """Parameters at a fixed length 2^m, taking r_e as large as the error budget allows.

    Used by the rate sweeps; the result is not checked and may be infeasible.
    """
    r_prime = max(0, ceil_log2(t + 1) - 1)
    r_e = m - r - ceil_log2(a + 2 * b + 1)
    return SchemeParams.build(r, m, r_prime, r_e, t, a, b)
