"""
Multilinear polynomials over GF(2).

A monomial is an int bitmask over the variables: bit ``i`` set means
``z_{i+1}`` is present. Because every exponent collapses to one
(``z*z = z``), the product of two monomials is the union of their masks.

Evaluation points follow a fixed convention: point ``P_j`` (1-based) is
the binary expansion of ``j - 1`` with ``z_1`` as the least significant
bit. Internally points are 0-based, so point ``p`` has ``z_{i+1} = (p >> i) & 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import DimensionMismatch, MismatchedVariableCount

NEG_INF = -math.inf


def degree_of(mask: int) -> int:
    return mask.bit_count()


def monomials(m: int, max_degree: int, min_degree: int = 0) -> list[int]:
    """Monomial masks with degree in [min_degree, max_degree].

    Ordered by degree, then by mask value. This is the row order of the RM
    generator matrices throughout the package.
    """
    out = []
    for d in range(max(min_degree, 0), min(max_degree, m) + 1):
        out.extend(sorted(sum(1 << i for i in c) for c in combinations(range(m), d)))
    return out


def monomial_name(mask: int) -> str:
    if mask == 0:
        return "1"
    return "".join(f"z{i + 1}" for i in range(mask.bit_length()) if (mask >> i) & 1)


def zeta_transform(values: np.ndarray, m: int) -> np.ndarray:
    """Subset-sum transform over GF(2) on a length-2^m vector.

    Maps a coefficient vector indexed by monomial mask to its evaluation
    vector indexed by point, and (being an involution mod 2) back again.
    """
    v = np.array(values, dtype=np.uint8).reshape((2,) * m) if m else np.array(values, dtype=np.uint8)
    if m == 0:
        return v.copy()
    # C order: axis m-1-i carries bit i of the flat index.
    for axis in range(m):
        lo = [slice(None)] * m
        hi = [slice(None)] * m
        lo[axis] = 0
        hi[axis] = 1
        v[tuple(hi)] ^= v[tuple(lo)]
    return v.reshape(-1)


@dataclass(frozen=True)
class MultilinearPoly:
    """Polynomial in ``m`` binary variables; ``terms`` holds the monomials with coefficient 1."""

    m: int
    terms: frozenset[int] = frozenset()

    def __post_init__(self):
        limit = 1 << self.m
        for t in self.terms:
            if not 0 <= t < limit:
                raise MismatchedVariableCount(f"monomial {t:#b} uses more than {self.m} variables")

    @classmethod
    def zero(cls, m: int) -> "MultilinearPoly":
        return cls(m)

    @classmethod
    def one(cls, m: int) -> "MultilinearPoly":
        return cls(m, frozenset({0}))

    @classmethod
    def var(cls, m: int, i: int) -> "MultilinearPoly":
        """The variable ``z_i`` (1-based, as in the usual notation)."""
        if not 1 <= i <= m:
            raise MismatchedVariableCount(f"z_{i} not among {m} variables")
        return cls(m, frozenset({1 << (i - 1)}))

    @classmethod
    def monomial(cls, m: int, mask: int) -> "MultilinearPoly":
        return cls(m, frozenset({mask}))

    @classmethod
    def from_terms(cls, m: int, terms: Iterable[int]) -> "MultilinearPoly":
        """Build from a multiset of monomials; repeated terms cancel in pairs."""
        acc: set[int] = set()
        for t in terms:
            acc ^= {t}
        return cls(m, frozenset(acc))

    @classmethod
    def from_coefficients(cls, m: int, basis: list[int], coeffs) -> "MultilinearPoly":
        return cls(m, frozenset(b for b, c in zip(basis, coeffs) if int(c) & 1))

    @classmethod
    def interpolate(cls, values) -> "MultilinearPoly":
        """The unique polynomial whose evaluation vector is ``values``."""
        values = np.asarray(values, dtype=np.uint8)
        m = int(values.size).bit_length() - 1
        if values.size != 1 << m:
            raise DimensionMismatch("length must be a power of two")
        coeffs = zeta_transform(values, m)
        return cls(m, frozenset(int(i) for i in np.flatnonzero(coeffs)))

    @property
    def degree(self) -> float:
        """Maximum term degree; ``-inf`` for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(t.bit_count() for t in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "MultilinearPoly"):
        if self.m != other.m:
            raise MismatchedVariableCount(f"{self.m} vs {other.m} variables")

    def __add__(self, other: "MultilinearPoly") -> "MultilinearPoly":
        self._check(other)
        return MultilinearPoly(self.m, self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other: "MultilinearPoly") -> "MultilinearPoly":
        return poly_mul(self, other)

    def restrict_degree(self, lo: float = NEG_INF, hi: float = math.inf) -> "MultilinearPoly":
        return MultilinearPoly(self.m, frozenset(t for t in self.terms if lo <= t.bit_count() <= hi))

    def coefficient(self, mask: int) -> int:
        return int(mask in self.terms)

    def evaluate(self) -> np.ndarray:
        return evaluate(self)

    def at(self, point: int) -> int:
        """Value at the 0-based point index ``point``."""
        return sum(1 for t in self.terms if point & t == t) & 1

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        ordered = sorted(self.terms, key=lambda t: (t.bit_count(), t))
        return " + ".join(monomial_name(t) for t in ordered)


def poly_mul(p: MultilinearPoly, q: MultilinearPoly) -> MultilinearPoly:
    """Product reduced by ``z*z = z``: term products are mask unions, coefficients mod 2."""
    p._check(q)
    acc: set[int] = set()
    for s in p.terms:
        for t in q.terms:
            acc ^= {s | t}
    return MultilinearPoly(p.m, frozenset(acc))


def evaluate(p: MultilinearPoly) -> np.ndarray:
    """Evaluation vector ``(p(P_1), ..., p(P_n))`` as a uint8 array."""
    coeffs = np.zeros(1 << p.m, dtype=np.uint8)
    for t in p.terms:
        coeffs[t] = 1
    return zeta_transform(coeffs, p.m)
