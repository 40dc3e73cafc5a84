"""
Storage encoding, query generation, server responses and round decoding.

Storage layout: every file is ``L`` stripes of ``k`` bits. Stripe ``l`` of
file ``mu`` is the coefficient vector of the storage polynomial ``g`` over
the RM(r, m) monomials, and server ``j`` keeps ``g(P_j)`` for every
(file, stripe) pair, file-major.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING

import numpy as np

from . import gf2
from .errors import DimensionMismatch, InconsistentLedger, KnowabilityError
from .gf2 import BitMatrix, XorBasis
from .params import SchemeParams
from .planning import QueryPlan, band_monomials, product_functionals, storage_monomials
from .poly import MultilinearPoly, evaluate, monomials
from .rm import decode, dual, rm_code

if TYPE_CHECKING:
    from .dss import SimulatedDSS


@dataclass(frozen=True)
class FileSystem:
    """``M`` files of ``L`` stripes of ``k`` bits, as a uint8 array of shape (M, L, k)."""

    data: np.ndarray

    def __post_init__(self):
        if self.data.ndim != 3:
            raise DimensionMismatch(f"file system must be 3-D, got shape {self.data.shape}")

    @classmethod
    def random(cls, M: int, params: SchemeParams, rng: np.random.Generator) -> "FileSystem":
        return cls(rng.integers(0, 2, size=(M, params.L, params.k), dtype=np.uint8))

    @property
    def M(self) -> int:
        return self.data.shape[0]

    @property
    def L(self) -> int:
        return self.data.shape[1]

    @property
    def k(self) -> int:
        return self.data.shape[2]


@dataclass(frozen=True)
class EncodedStorage:
    """``servers[j]`` is the content of server j (0-based): M*L bits, file-major."""

    servers: np.ndarray
    M: int
    L: int

    @property
    def n(self) -> int:
        return self.servers.shape[0]


def storage_polynomial(row, params: SchemeParams) -> MultilinearPoly:
    return MultilinearPoly.from_coefficients(params.m, storage_monomials(params), row)


def encode_storage(X: FileSystem, params: SchemeParams) -> EncodedStorage:
    """Y = X G_C: each server stores every stripe polynomial evaluated at its point."""
    if X.k != params.k or X.L != params.L:
        raise DimensionMismatch(f"file system has L={X.L}, k={X.k}; scheme needs L={params.L}, k={params.k}")
    G = rm_code(params.r, params.m).generator.to_array()
    rows = X.data.reshape(X.M * X.L, X.k).astype(np.int64)
    Y = (rows @ G.astype(np.int64)) & 1
    return EncodedStorage(np.ascontiguousarray(Y.T.astype(np.uint8)), X.M, X.L)


@dataclass(frozen=True)
class RoundQueries:
    """Query polynomials ``polys[mu][l]`` and the per-server bit vectors they evaluate to."""

    polys: tuple[tuple[MultilinearPoly, ...], ...]
    vectors: np.ndarray  # (n, M*L)


def random_interference(params: SchemeParams, rng: np.random.Generator) -> MultilinearPoly:
    """Uniform element of the retrieval code RM(r', m), as a polynomial."""
    basis = monomials(params.m, params.r_prime)
    coeffs = rng.integers(0, 2, size=len(basis))
    return MultilinearPoly.from_coefficients(params.m, basis, coeffs)


def build_round_queries(
    plan: QueryPlan,
    s: int,
    i: int,
    M: int,
    params: SchemeParams,
    rng: np.random.Generator,
    zero_interference: bool = False,
) -> RoundQueries:
    """Queries for round ``s`` (0-based) when retrieving file ``i`` (0-based).

    Every (file, stripe) slot gets an independent uniform codeword of the
    retrieval code; the slots of file ``i`` also get the plan's retriever
    polynomial. ``zero_interference`` drops the random part (test hook).
    """
    if not 0 <= s < len(plan.rounds):
        raise IndexError(f"round {s} outside plan of {len(plan.rounds)} rounds")
    if not 0 <= i < M:
        raise IndexError(f"file {i} outside [0, {M})")
    e_row = plan.rounds[s]
    zero = MultilinearPoly.zero(params.m)
    polys = []
    for mu in range(M):
        file_polys = []
        for ell in range(params.L):
            d = zero if zero_interference else random_interference(params, rng)
            file_polys.append(d + e_row[ell] if mu == i else d)
        polys.append(tuple(file_polys))
    vectors = np.stack([evaluate(q) for file_polys in polys for q in file_polys], axis=1)
    return RoundQueries(tuple(polys), vectors.astype(np.uint8))


def respond(column, query) -> int:
    """An honest server's answer: inner product of its content with its query."""
    column = np.asarray(column, dtype=np.uint8)
    query = np.asarray(query, dtype=np.uint8)
    if column.shape != query.shape:
        raise DimensionMismatch(f"content {column.shape} vs query {query.shape}")
    return int(np.bitwise_and(column, query).sum() & 1)


def honest_responses(storage: EncodedStorage, queries: RoundQueries) -> np.ndarray:
    return (np.einsum("jx,jx->j", storage.servers.astype(np.int64), queries.vectors.astype(np.int64)) & 1).astype(
        np.uint8
    )


@dataclass(frozen=True)
class ReceivedWord:
    """Responses as received: ``bits[j]`` is meaningless when ``j`` is in ``erased``."""

    bits: np.ndarray
    erased: frozenset[int] = frozenset()


class RecoveryLedger:
    """GF(2) equations over the L*k symbols of the requested file.

    Symbol ``l*k + j`` is coefficient ``j`` of stripe ``l``. Equations are
    kept in reduced echelon form, so a symbol is solved exactly when its unit
    functional lies in the span.
    """

    def __init__(self, L: int, k: int):
        self.L = L
        self.k = k
        self._basis = XorBasis()
        self.solved: dict[int, int] = {}

    @property
    def unknowns(self) -> int:
        return self.L * self.k

    @property
    def rank(self) -> int:
        return len(self._basis)

    @property
    def complete(self) -> bool:
        return len(self.solved) == self.unknowns

    def value_of(self, functional: int) -> int | None:
        return self._basis.value_of(functional)

    def add_equation(self, functional: int, value: int) -> bool:
        """Record ``functional . x = value``; True if the equation was new.

        Raises:
            InconsistentLedger: the equation contradicts earlier ones.
        """
        rest, implied = self._basis.reduce_with_payload(functional, value & 1)
        if rest == 0:
            if implied:
                raise InconsistentLedger(f"equation on {functional:#x} contradicts the ledger")
            return False
        self._basis.add(functional, value & 1)
        return True

    def refresh(self) -> list[int]:
        """Move newly determined symbols into ``solved``; returns their indices."""
        fresh = []
        for u in range(self.unknowns):
            if u in self.solved:
                continue
            v = self._basis.value_of(1 << u)
            if v is not None:
                self.solved[u] = v
                fresh.append(u)
        return fresh

    def file(self) -> np.ndarray:
        if not self.complete:
            raise InconsistentLedger(f"only {len(self.solved)} of {self.unknowns} symbols solved")
        out = np.zeros(self.unknowns, dtype=np.uint8)
        for u, v in self.solved.items():
            out[u] = v
        return out.reshape(self.L, self.k)


@dataclass(frozen=True)
class Projector:
    """Maps a corrected response to the coefficients of its band terms.

    H generates (C * D)^perp; it annihilates the interference RM(r + r', m).
    With K = H E (E the evaluation matrix of the band monomials, one column
    each) and a row set I where K is invertible, the band coefficients are
    ``K[I]^-1 (H w)[I]``.
    """

    band: tuple[int, ...]
    H: BitMatrix
    rows: tuple[int, ...]
    inverse: BitMatrix

    def coefficients(self, word) -> dict[int, int]:
        syndrome = self.H.mul_vec(word)
        picked = syndrome[list(self.rows)]
        c = self.inverse.mul_vec(picked)
        return {beta: int(v) for beta, v in zip(self.band, c)}


@lru_cache(maxsize=None)
def projector(r: int, r_prime: int, r_e: int, m: int) -> Projector:
    H = dual(rm_code(r + r_prime, m)).generator
    band = tuple(monomials(m, r + r_e, r + r_prime + 1))
    E_T = BitMatrix((gf2.pack(evaluate(MultilinearPoly.monomial(m, b))) for b in band), 1 << m)
    K_T = E_T @ H.transpose()  # |band| x dim H, the transpose of K
    rows = gf2.find_information_set(K_T)
    # invert_on_columns gives (K^T[:, I])^-1 = ((K[I])^-1)^T
    inverse = gf2.invert_on_columns(K_T, rows).transpose()
    return Projector(band, H, rows, inverse)


def params_projector(params: SchemeParams) -> Projector:
    return projector(params.r, params.r_prime, params.r_e, params.m)


@dataclass
class RoundOutcome:
    index: int
    gamma: MultilinearPoly
    decoded: MultilinearPoly
    band_coefficients: dict[int, int]
    new_equations: int
    new_symbols: list[int]


def decode_round(
    received: ReceivedWord,
    plan: QueryPlan,
    s: int,
    ledger: RecoveryLedger,
    params: SchemeParams,
) -> RoundOutcome:
    """Fold round ``s`` (0-based) into the ledger.

    Subtract the known part gamma of the response, decode in RM(r + r_e, m)
    with the erasures and ``b`` errors, project away the interference and
    turn each band coefficient into an equation on the file symbols.

    Raises:
        KnowabilityError: a term above r + r_e has an unknown coefficient.
        DecodingFailure: the adversary exceeded the budget.
        InconsistentLedger: a recovered equation contradicts earlier ones.
    """
    funcs = product_functionals(plan.rounds[s], params)
    hi = params.decode_order
    gamma_terms = {}
    for beta, f in funcs.items():
        v = ledger.value_of(f)
        if v is None:
            if beta.bit_count() > hi:
                raise KnowabilityError(f"round {s + 1}: coefficient of {beta:#b} is not known yet")
            continue
        gamma_terms[beta] = v
    gamma = MultilinearPoly(params.m, frozenset(b for b, v in gamma_terms.items() if v))

    word = received.bits.astype(np.uint8) ^ evaluate(gamma)
    decoded = decode(word, rm_code(hi, params.m), received.erased, params.b)
    coeffs = params_projector(params).coefficients(evaluate(decoded))

    added = 0
    for beta in band_monomials(params):
        value = coeffs[beta] ^ gamma_terms.get(beta, 0)
        added += ledger.add_equation(funcs.get(beta, 0), value)
    fresh = ledger.refresh()
    return RoundOutcome(s + 1, gamma, decoded, coeffs, added, fresh)


@dataclass
class Transcript:
    file_index: int
    queries: list[np.ndarray] = field(default_factory=list)
    honest: list[np.ndarray] = field(default_factory=list)
    received: list[ReceivedWord] = field(default_factory=list)
    rounds: list[RoundOutcome] = field(default_factory=list)
    n: int = 0
    recovered_bits: int = 0

    @property
    def downloaded_bits(self) -> int:
        return len(self.received) * self.n

    @property
    def rate(self) -> Fraction:
        return Fraction(self.recovered_bits, self.downloaded_bits)


def retrieve(
    i: int,
    dss: "SimulatedDSS",
    params: SchemeParams,
    plan: QueryPlan,
    rng: np.random.Generator,
) -> tuple[np.ndarray, Transcript]:
    """Privately retrieve file ``i`` (0-based): returns its (L, k) bits and the transcript."""
    from .dss import apply_adversary

    storage = dss.storage
    ledger = RecoveryLedger(params.L, params.k)
    transcript = Transcript(i, n=storage.n)
    for s in range(len(plan.rounds)):
        queries = build_round_queries(plan, s, i, storage.M, params, rng)
        honest = honest_responses(storage, queries)
        received = apply_adversary(dss, honest, rng)
        outcome = decode_round(received, plan, s, ledger, params)
        transcript.queries.append(queries.vectors)
        transcript.honest.append(honest)
        transcript.received.append(received)
        transcript.rounds.append(outcome)
    data = ledger.file()
    transcript.recovered_bits = data.size
    return data, transcript
