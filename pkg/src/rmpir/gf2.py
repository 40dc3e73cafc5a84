"""
Dense GF(2) linear algebra on bit-packed rows.

A row of a :class:`BitMatrix` is a Python ``int`` whose bit ``j`` holds the
entry in column ``j``, so row operations are single XORs regardless of width.
Vectors cross the public API as numpy ``uint8`` arrays of zeros and ones.

Every elimination uses the lowest available index as pivot, which makes
``solve`` and ``find_information_set`` deterministic.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NoSolution, RankDeficient, Singular


def pack(bits) -> int:
    """Pack a 0/1 sequence into an int, entry ``j`` at bit ``j``."""
    out = 0
    for j, v in enumerate(np.asarray(bits, dtype=np.uint8).ravel()):
        if v & 1:
            out |= 1 << j
    return out


def unpack(value: int, length: int) -> np.ndarray:
    if value >> length:
        raise DimensionMismatch(f"value has bits beyond length {length}")
    return np.array([(value >> j) & 1 for j in range(length)], dtype=np.uint8)


def parity(value: int) -> int:
    return value.bit_count() & 1


def iter_bits(value: int):
    """Yield indices of set bits, lowest first."""
    while value:
        low = value & -value
        yield low.bit_length() - 1
        value ^= low


class BitMatrix:
    """Immutable binary matrix stored as one int per row."""

    __slots__ = ("_rows", "_ncols")

    def __init__(self, rows: Iterable[int], ncols: int):
        rows = tuple(int(r) for r in rows)
        limit = 1 << ncols
        for r in rows:
            if r < 0 or r >= limit:
                raise DimensionMismatch(f"row {r:#x} does not fit in {ncols} columns")
        self._rows = rows
        self._ncols = ncols

    @classmethod
    def from_array(cls, array) -> "BitMatrix":
        a = np.asarray(array, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise DimensionMismatch("expected a 2-D array")
        return cls((pack(row) for row in a), a.shape[1])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls([0] * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls((1 << i for i in range(n)), n)

    @property
    def rows(self) -> tuple[int, ...]:
        return self._rows

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self._rows), self._ncols)

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        if not 0 <= j < self._ncols:
            raise IndexError(j)
        return (self._rows[i] >> j) & 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self._ncols == other._ncols and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self._rows, self._ncols))

    def __repr__(self) -> str:
        body = "\n".join(
            " " + "".join(str((r >> j) & 1) for j in range(self._ncols)) for r in self._rows
        )
        return f"BitMatrix({self.nrows}x{self.ncols})\n{body}"

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        for i, r in enumerate(self._rows):
            out[i] = unpack(r, self._ncols)
        return out

    def row(self, i: int) -> np.ndarray:
        return unpack(self._rows[i], self._ncols)

    def transpose(self) -> "BitMatrix":
        cols = [0] * self._ncols
        for i, r in enumerate(self._rows):
            for j in iter_bits(r):
                cols[j] |= 1 << i
        return BitMatrix(cols, len(self._rows))

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self._ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        orow = other.rows
        out = []
        for r in self._rows:
            acc = 0
            for j in iter_bits(r):
                acc ^= orow[j]
            out.append(acc)
        return BitMatrix(out, other.ncols)

    def mul_vec(self, vector) -> np.ndarray:
        """Return ``M @ v`` for a 0/1 vector of length ``ncols``."""
        v = np.asarray(vector, dtype=np.uint8)
        if v.shape != (self._ncols,):
            raise DimensionMismatch(f"vector of length {v.shape} for {self.shape} matrix")
        packed = pack(v)
        return np.array([parity(r & packed) for r in self._rows], dtype=np.uint8)

    def select_columns(self, cols: Sequence[int]) -> "BitMatrix":
        cols = list(cols)
        out = []
        for r in self._rows:
            acc = 0
            for new, old in enumerate(cols):
                if (r >> old) & 1:
                    acc |= 1 << new
            out.append(acc)
        return BitMatrix(out, len(cols))

    def select_rows(self, rows: Sequence[int]) -> "BitMatrix":
        return BitMatrix((self._rows[i] for i in rows), self._ncols)

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self._ncols != other.ncols:
            raise DimensionMismatch("column counts differ")
        return BitMatrix(self._rows + other.rows, self._ncols)

    def is_zero(self) -> bool:
        return not any(self._rows)


def _eliminate(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduce ``rows`` in place to RREF; returns (rows, pivot columns).

    Pivot columns are taken in ascending order and the first row (lowest
    index) holding a one in that column is used.
    """
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        bit = 1 << col
        found = -1
        for i in range(top, len(rows)):
            if rows[i] & bit:
                found = i
                break
        if found < 0:
            continue
        rows[top], rows[found] = rows[found], rows[top]
        prow = rows[top]
        for i in range(len(rows)):
            if i != top and rows[i] & bit:
                rows[i] ^= prow
        pivots.append(col)
        top += 1
        if top == len(rows):
            break
    return rows, pivots


def rank(M: BitMatrix) -> int:
    basis = XorBasis()
    for r in M.rows:
        basis.add(r)
    return len(basis)


def row_reduce(M: BitMatrix) -> BitMatrix:
    """Reduced row echelon form with zero rows dropped."""
    rows, pivots = _eliminate(list(M.rows), M.ncols)
    return BitMatrix(rows[: len(pivots)], M.ncols)


def same_row_space(A: BitMatrix, B: BitMatrix) -> bool:
    return row_reduce(A) == row_reduce(B)


def in_row_space(vector, M: BitMatrix) -> bool:
    basis = XorBasis()
    for r in M.rows:
        basis.add(r)
    return basis.reduce(pack(vector)) == 0


def solve(A: BitMatrix, b) -> np.ndarray:
    """Return some ``x`` with ``A x = b``; free variables are set to zero.

    Raises:
        NoSolution: ``b`` is not in the column space of ``A``.
    """
    b = np.asarray(b, dtype=np.uint8)
    if b.shape != (A.nrows,):
        raise DimensionMismatch(f"rhs of length {b.shape} for {A.shape} system")
    n = A.ncols
    aug = [r | (int(bi & 1) << n) for r, bi in zip(A.rows, b)]
    aug, pivots = _eliminate(aug, n)
    rhs_bit = 1 << n
    for r in aug[len(pivots):]:
        if r & rhs_bit:
            raise NoSolution("right-hand side is outside the column space")
    x = np.zeros(n, dtype=np.uint8)
    for r, col in zip(aug, pivots):
        x[col] = (r >> n) & 1
    return x


def null_space(M: BitMatrix) -> BitMatrix:
    """Basis of ``{x : M x = 0}`` as the rows of a matrix."""
    n = M.ncols
    rows, pivots = _eliminate(list(M.rows), n)
    rows = rows[: len(pivots)]
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = 1 << free
        for r, col in zip(rows, pivots):
            if (r >> free) & 1:
                v |= 1 << col
        basis.append(v)
    return BitMatrix(basis, n)


def find_information_set(G: BitMatrix) -> tuple[int, ...]:
    """Lowest-index-first set of ``G.nrows`` columns forming an invertible submatrix.

    Indices are 0-based.

    Raises:
        RankDeficient: ``G`` does not have full row rank.
    """
    k = G.nrows
    basis = XorBasis()
    chosen: list[int] = []
    for j, col in enumerate(G.transpose().rows):
        if len(chosen) == k:
            break
        if basis.add(col):
            chosen.append(j)
    if len(chosen) < k:
        raise RankDeficient(f"rank {len(chosen)} < {k} rows")
    return tuple(chosen)


def extend_information_set(G: BitMatrix, start: Sequence[int]) -> tuple[int, ...]:
    """Grow an independent column set of ``G`` to an information set, lowest index first."""
    cols = G.transpose().rows
    basis = XorBasis()
    chosen = []
    for j in start:
        if not basis.add(cols[j]):
            raise RankDeficient(f"column {j} is dependent on the starting set")
        chosen.append(j)
    for j, col in enumerate(cols):
        if len(chosen) == G.nrows:
            break
        if j in chosen:
            continue
        if basis.add(col):
            chosen.append(j)
    if len(chosen) < G.nrows:
        raise RankDeficient(f"rank {len(chosen)} < {G.nrows} rows")
    return tuple(sorted(chosen))


def invert_on_columns(M: BitMatrix, cols: Sequence[int]) -> BitMatrix:
    """Inverse of the square submatrix ``M[:, cols]``.

    Raises:
        Singular: the selected submatrix is not invertible.
    """
    cols = list(cols)
    k = M.nrows
    if len(cols) != k:
        raise DimensionMismatch(f"need {k} columns, got {len(cols)}")
    sub = M.select_columns(cols)
    # [sub | I] -> [I | sub^-1]
    aug = [r | (1 << (k + i)) for i, r in enumerate(sub.rows)]
    aug, pivots = _eliminate(aug, k)
    if pivots != list(range(k)):
        raise Singular("selected columns do not form an invertible submatrix")
    return BitMatrix((r >> k for r in aug), k)


def minimum_weight(M: BitMatrix) -> int | None:
    """Minimum nonzero weight in the row space, by Gray-code enumeration.

    Returns None for the zero space. Cost is 2^rank, so callers keep rank small.
    """
    basis = row_reduce(M).rows
    if not basis:
        return None
    best = None
    word = 0
    for i in range(1, 1 << len(basis)):
        word ^= basis[(i & -i).bit_length() - 1]
        w = word.bit_count()
        if best is None or w < best:
            best = w
    return best


def span_words(M: BitMatrix) -> list[int]:
    """All codewords of the row space, as packed ints."""
    basis = row_reduce(M).rows
    words = [0]
    for b in basis:
        words += [w ^ b for w in words]
    return words


class XorBasis:
    """Incremental reduced echelon basis of a GF(2) row space.

    Each stored row may carry a payload bit, which is combined alongside the
    row. That turns the basis into a solver for ``row . x = payload`` systems:
    ``reduce_with_payload`` of a functional already in the span yields its
    value.

    Rows are kept fully reduced: a pivot bit appears in exactly one row.
    """

    __slots__ = ("_rows", "_payload", "_mask")

    def __init__(self):
        self._rows: dict[int, int] = {}  # pivot bit value -> row
        self._payload: dict[int, int] = {}
        self._mask = 0

    def __len__(self) -> int:
        return len(self._rows)

    def copy(self) -> "XorBasis":
        other = XorBasis()
        other._rows = dict(self._rows)
        other._payload = dict(self._payload)
        other._mask = self._mask
        return other

    @property
    def pivot_mask(self) -> int:
        return self._mask

    def reduce_with_payload(self, row: int, payload: int = 0) -> tuple[int, int]:
        hits = row & self._mask
        while hits:
            low = hits & -hits
            row ^= self._rows[low]
            payload ^= self._payload[low]
            hits ^= low
        return row, payload

    def reduce(self, row: int) -> int:
        hits = row & self._mask
        while hits:
            low = hits & -hits
            row ^= self._rows[low]
            hits ^= low
        return row

    def contains(self, row: int) -> bool:
        return self.reduce(row) == 0

    def value_of(self, row: int) -> int | None:
        """Payload implied for ``row`` if it lies in the span, else None."""
        rest, payload = self.reduce_with_payload(row)
        return payload if rest == 0 else None

    def add(self, row: int, payload: int = 0) -> bool:
        """Insert a row; returns True if it enlarged the span.

        A dependent row leaves the basis unchanged; the caller can compare
        payloads via ``reduce_with_payload`` beforehand.
        """
        row, payload = self.reduce_with_payload(row, payload)
        if row == 0:
            return False
        low = row & -row
        for pivot, existing in self._rows.items():
            if existing & low:
                self._rows[pivot] = existing ^ row
                self._payload[pivot] ^= payload
        self._rows[low] = row
        self._payload[low] = payload
        self._mask |= low
        return True

    def items(self):
        """Yield ``(pivot_index, row, payload)`` in ascending pivot order."""
        for low in sorted(self._rows):
            yield low.bit_length() - 1, self._rows[low], self._payload[low]
