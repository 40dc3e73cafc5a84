"""
Binary Reed-Muller codes RM(r, m).

Codewords are evaluation vectors of polynomials of degree <= r over all
2^m points (see :mod:`rmpir.poly` for the point order). Generator rows
are the evaluations of the degree <= r monomials, degree ascending then
mask ascending, i.e. ``1, z1, z2, ..., z1z2, ...``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .errors import (
    DecodingFailure,
    InvalidOrder,
    LengthMismatch,
    NoDual,
    SingularMap,
)
from .gf2 import BitMatrix
from .poly import MultilinearPoly, evaluate, monomials


@dataclass(frozen=True)
class RMCode:
    r: int
    m: int

    def __post_init__(self):
        if not 0 <= self.r <= self.m:
            raise InvalidOrder(f"order r={self.r} outside [0, m={self.m}]")

    @property
    def n(self) -> int:
        return 1 << self.m

    @property
    def k(self) -> int:
        return sum(comb(self.m, i) for i in range(self.r + 1))

    @property
    def d_min(self) -> int:
        return 1 << (self.m - self.r)

    @property
    def monomials(self) -> list[int]:
        return monomials(self.m, self.r)

    @property
    def generator(self) -> BitMatrix:
        return _generator(self.r, self.m)

    def encode(self, coeffs) -> np.ndarray:
        """Codeword for a coefficient vector over ``self.monomials``."""
        return evaluate(self.poly(coeffs))

    def poly(self, coeffs) -> MultilinearPoly:
        return MultilinearPoly.from_coefficients(self.m, self.monomials, coeffs)

    def contains(self, word) -> bool:
        """Membership test by interpolation: the word's polynomial has degree <= r."""
        return MultilinearPoly.interpolate(word).degree <= self.r

    def __str__(self) -> str:
        return f"RM({self.r},{self.m}) [{self.n},{self.k},{self.d_min}]"


@lru_cache(maxsize=None)
def _generator(r: int, m: int) -> BitMatrix:
    rows = [gf2.pack(evaluate(MultilinearPoly.monomial(m, t))) for t in monomials(m, r)]
    return BitMatrix(rows, 1 << m)


@lru_cache(maxsize=None)
def rm_code(r: int, m: int) -> RMCode:
    if m < 0:
        raise InvalidOrder(f"variable count m={m} is negative")
    return RMCode(r, m)


def dual(code: RMCode) -> RMCode:
    """RM(r, m)^perp = RM(m - r - 1, m).

    Raises:
        NoDual: for r = m, whose dual is the zero code.
    """
    if code.r >= code.m:
        raise NoDual(f"dual of RM({code.r},{code.m}) is the zero code")
    return rm_code(code.m - code.r - 1, code.m)


def star_product_span(c1: RMCode, c2: RMCode) -> BitMatrix:
    """Row-reduced generator of span{c * d : c in c1, d in c2}."""
    if c1.n != c2.n:
        raise LengthMismatch(f"lengths {c1.n} and {c2.n}")
    basis = gf2.XorBasis()
    for a in c1.generator.rows:
        for b in c2.generator.rows:
            basis.add(a & b)
    return gf2.row_reduce(BitMatrix([row for _, row, _ in basis.items()], c1.n))


def _subcube_axes(mask: int, m: int) -> tuple[int, ...]:
    # flat index bit i lives on axis m-1-i of the (2,)*m view
    return tuple(m - 1 - i for i in range(m) if (mask >> i) & 1)


def majority_decode(word, code: RMCode) -> MultilinearPoly:
    """Reed's majority-logic decoder.

    Coefficients are recovered from the top degree down. For a monomial on
    variable set S, each assignment of the remaining variables gives one vote:
    the XOR of the (partially cleaned) word over the subcube spanned by S.
    Corrects up to d_min/2 - 1 errors; ties resolve to 0.
    """
    m = code.m
    w = np.array(word, dtype=np.uint8)
    if w.shape != (code.n,):
        raise LengthMismatch(f"word of length {w.shape} for {code}")
    found: list[int] = []
    for deg in range(code.r, -1, -1):
        layer = []
        for mask in monomials(m, deg, deg):
            if m == 0:
                votes = w
            else:
                cube = w.reshape((2,) * m)
                axes = _subcube_axes(mask, m)
                votes = np.bitwise_xor.reduce(cube, axis=axes) if axes else cube
            ones = int(np.count_nonzero(votes))
            if 2 * ones > votes.size:
                layer.append(mask)
        if layer:
            w ^= evaluate(MultilinearPoly(m, frozenset(layer)))
            found.extend(layer)
    return MultilinearPoly(m, frozenset(found))


def decode(
    word,
    code: RMCode,
    erasures: Iterable[int] = (),
    b_max: int | None = None,
) -> MultilinearPoly:
    """Bounded-distance error and erasure decoding.

    Erased positions are filled in every possible way; each filling is
    majority-decoded and accepted if the result is within ``b_max`` of the
    word on the non-erased positions. With ``|erasures| + 2*b_max < d_min``
    at most one codeword can qualify.

    Args:
        word: received 0/1 vector; values at erased positions are ignored.
        code: the RM code to decode in.
        erasures: 0-based erased positions.
        b_max: error budget; defaults to the largest one the erasures allow.

    Raises:
        DecodingFailure: no (or more than one) codeword fits the budget.
    """
    erased = sorted(set(erasures))
    if b_max is None:
        b_max = max(0, (code.d_min - len(erased) - 1) // 2)
    if len(erased) + 2 * b_max >= code.d_min:
        raise ValueError(
            f"{len(erased)} erasures and {b_max} errors exceed {code} (need e + 2b < {code.d_min})"
        )
    w = np.array(word, dtype=np.uint8) & 1
    if w.shape != (code.n,):
        raise LengthMismatch(f"word of length {w.shape} for {code}")
    keep = np.ones(code.n, dtype=bool)
    keep[erased] = False

    result = None
    for fill in product((0, 1), repeat=len(erased)):
        if erased:
            w[erased] = fill
        candidate = majority_decode(w, code)
        dist = int(np.count_nonzero((evaluate(candidate) ^ w)[keep]))
        if dist <= b_max:
            if result is not None and candidate != result:
                raise DecodingFailure("several codewords within the error budget")
            result = candidate
    if result is None:
        raise DecodingFailure(f"no codeword of {code} within {b_max} errors of the received word")
    return result


def nested_information_set(inner: RMCode, outer: RMCode) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Information sets I_inner of ``inner`` and I_outer of ``outer`` with I_inner a subset of I_outer.

    The inner generator is a prefix of the outer one (same monomial order),
    so the inner set stays independent in the outer generator and can be
    extended greedily.
    """
    if inner.m != outer.m or inner.r > outer.r:
        raise InvalidOrder(f"{inner} is not nested in {outer}")
    i_in = gf2.find_information_set(inner.generator)
    i_out = gf2.extend_information_set(outer.generator, i_in)
    return i_in, i_out


def affine_automorphism(A: BitMatrix, b: Sequence[int] | np.ndarray) -> np.ndarray:
    """Point permutation of z -> A z + b.

    Returns ``perm`` with ``perm[j]`` the 0-based index of the image of point
    ``j``; a codeword ``c`` maps to ``c[perm]``.

    Raises:
        SingularMap: ``A`` is not invertible.
    """
    m = A.nrows
    if A.shape != (m, m):
        raise SingularMap(f"linear part must be square, got {A.shape}")
    if gf2.rank(A) < m:
        raise SingularMap("linear part is singular")
    shift = gf2.pack(b) if m else 0
    perm = np.empty(1 << m, dtype=np.int64)
    for p in range(1 << m):
        image = 0
        for i, row in enumerate(A.rows):
            image |= gf2.parity(row & p) << i
        perm[p] = image ^ shift
    return perm


def translation(m: int, i: int, j: int) -> np.ndarray:
    """Translation automorphism sending point i to point j (0-based)."""
    return affine_automorphism(BitMatrix.identity(m), gf2.unpack(i ^ j, m))
