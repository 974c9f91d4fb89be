"""
Paige Loops
===========

Zorn vector matrices over GF(q) and the simple Moufang loops M*(q).

A Zorn matrix (a, α; β, b) has scalar diagonal a, b and vector off-diagonal
α, β. Multiplication:

    (a, α; β, b)(c, γ; δ, d) = (ac + α·δ,  aγ + dα − β×δ;
                                cβ + bδ + α×γ,  bd + β·γ)

norm(a, α; β, b) = ab − α·β is multiplicative. M*(q) is the set of norm-1
matrices modulo {±I}.

Element indexing of M*(q):
    Each class {M, −M} is represented by the lexicographically smaller of the
    two coordinate tuples (a, α₀, α₁, α₂, β₀, β₁, β₂, b). The identity class is
    element 0; the rest follow in lexicographic order of representatives.

Batches of matrices are int64 arrays of shape (m, 8) in the same coordinate
order, so whole rows of the Cayley table are computed in one numpy pass.
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import Tuple

import numpy as np

from .errors import CapacityError, LoopError, OracleFailure
from .fields import GaloisField, Vec3, gf, prime_power
from .limits import DEFAULT_LIMITS, EngineConstants, EngineLimits, chunked, ordered_map
from .loop_core import CayleyTable, validate
from .normality import is_simple
from .varieties import is_associative, is_commutative, is_moufang


logger = logging.getLogger(__name__)

COORDS = 8


# =============================================================================
# ZORN MATRIX
# =============================================================================

@dataclass(frozen=True)
class ZornMatrix:
    """
    A single Zorn vector matrix; entries are GF(q) element codes.
    """
    a: int
    alpha: Vec3
    beta: Vec3
    b: int

    @classmethod
    def identity(cls) -> "ZornMatrix":
        return cls(1, Vec3(0, 0, 0), Vec3(0, 0, 0), 1)

    @classmethod
    def from_array(cls, row: np.ndarray) -> "ZornMatrix":
        r = [int(v) for v in row]
        return cls(r[0], Vec3(*r[1:4]), Vec3(*r[4:7]), r[7])

    def as_tuple(self) -> Tuple[int, ...]:
        return (self.a, *self.alpha, *self.beta, self.b)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=np.int64)

    def norm(self, q: int) -> int:
        return int(batch_norm(gf(q), self.as_array()[None, :])[0])

    def negate(self, q: int) -> "ZornMatrix":
        return ZornMatrix.from_array(gf(q).neg_table[self.as_array()])

    def inverse(self, q: int) -> "ZornMatrix":
        """(b, −α; −β, a); the two-sided inverse when the norm is 1."""
        F = gf(q)
        neg = F.neg_table
        return ZornMatrix(self.b, Vec3(*(int(v) for v in neg[self.alpha.as_array()])),
                          Vec3(*(int(v) for v in neg[self.beta.as_array()])), self.a)


def zorn_mul(q: int, M1: ZornMatrix, M2: ZornMatrix) -> ZornMatrix:
    """Product of two Zorn matrices over GF(q)."""
    out = batch_mul(gf(q), M1.as_array()[None, :], M2.as_array()[None, :])
    return ZornMatrix.from_array(out[0])


# =============================================================================
# BATCH ARITHMETIC
# =============================================================================

def batch_mul(F: GaloisField, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Row-wise products of two (m, 8) batches."""
    A, M = F.add_table, F.mul_table
    a, al, be, b = X[:, 0], X[:, 1:4], X[:, 4:7], X[:, 7]
    c, ga, de, d = Y[:, 0], Y[:, 1:4], Y[:, 4:7], Y[:, 7]

    out = np.empty_like(X)
    out[:, 0] = A[M[a, c], F.dot(al, de)]
    out[:, 1:4] = F.vsub(F.vadd(F.scale(a, ga), F.scale(d, al)), F.cross(be, de))
    out[:, 4:7] = F.vadd(F.vadd(F.scale(c, be), F.scale(b, de)), F.cross(al, ga))
    out[:, 7] = A[M[b, d], F.dot(be, ga)]
    return out


def batch_norm(F: GaloisField, X: np.ndarray) -> np.ndarray:
    """ab − α·β for every row."""
    return F.add_table[F.mul_table[X[:, 0], X[:, 7]], F.neg_table[F.dot(X[:, 1:4], X[:, 4:7])]]


def encode(q: int, X: np.ndarray) -> np.ndarray:
    """Coordinate tuples as base-q integers; numeric order equals lexicographic order."""
    weights = q ** np.arange(COORDS - 1, -1, -1, dtype=np.int64)
    return X @ weights


def all_matrices(q: int) -> np.ndarray:
    """Every coordinate tuple over GF(q), in lexicographic order."""
    grids = np.indices((q,) * COORDS).reshape(COORDS, -1).T
    return np.ascontiguousarray(grids, dtype=np.int64)


def norm_one_matrices(q: int) -> np.ndarray:
    """All norm-1 Zorn matrices over GF(q), by brute force over the q⁸ tuples."""
    X = all_matrices(q)
    return X[batch_norm(gf(q), X) == 1]


# =============================================================================
# PAIGE LOOP
# =============================================================================

def paige_order(q: int) -> int:
    """
    |M*(q)| = q³(q⁴ − 1) / gcd(2, q − 1).

    Raises:
        UnsupportedOrder: q is not a prime power
    """
    prime_power(q)
    return q ** 3 * (q ** 4 - 1) // gcd(2, q - 1)


def paige_representatives(q: int) -> np.ndarray:
    """Canonical class representatives of M*(q), identity first."""
    F = gf(q)
    X = norm_one_matrices(q)
    negX = F.neg_table[X]
    codes, neg_codes = encode(q, X), encode(q, negX)
    reps = X[codes <= neg_codes]
    rep_codes = encode(q, reps)
    identity_code = int(encode(q, ZornMatrix.identity().as_array()[None, :])[0])
    order = np.argsort(rep_codes)
    reps, rep_codes = reps[order], rep_codes[order]
    first = np.flatnonzero(rep_codes == identity_code)
    rest = np.flatnonzero(rep_codes != identity_code)
    return reps[np.concatenate([first, rest])]


def paige_loop(q: int,
               limits: EngineLimits = DEFAULT_LIMITS,
               verify: bool = True) -> CayleyTable:
    """
    Cayley table of M*(q).

    Args:
        q: Field order from the supported set
        limits: Thread count for row construction and verification
        verify: Run the post-construction checks (Moufang, simple, ...)

    Raises:
        UnsupportedOrder: q is not a supported field order
        CapacityError: The loop would exceed EngineConstants.MAX_ORDER
        OracleFailure: The constructed table fails a post-check
    """
    F = gf(q)
    order = paige_order(q)
    if order > EngineConstants.MAX_ORDER:
        raise CapacityError("order", EngineConstants.MAX_ORDER, order)

    logger.info(f"🔨 Building M*({q}) (order {order})")
    reps = paige_representatives(q)
    n = reps.shape[0]
    if n != order:
        raise OracleFailure(f"M*({q}): found {n} classes, expected {order}")

    index_of = np.full(q ** COORDS, -1, dtype=np.int64)
    index_of[encode(q, reps)] = np.arange(n)
    index_of[encode(q, F.neg_table[reps])] = np.arange(n)

    def rows(block: range) -> np.ndarray:
        X = np.repeat(reps[block.start:block.stop], n, axis=0)
        Y = np.tile(reps, (len(block), 1))
        return index_of[encode(q, batch_mul(F, X, Y))].reshape(len(block), n)

    table = np.concatenate(ordered_map(rows, chunked(n, limits.threads), limits.threads), axis=0)
    if (table < 0).any():
        raise OracleFailure(f"M*({q}): a product left the norm-1 set")
    try:
        L = validate(table)
    except LoopError as exc:
        raise OracleFailure(f"M*({q}) is not a loop: {exc}") from exc
    if L.identity != 0:
        raise OracleFailure(f"M*({q}): identity landed on element {L.identity}")
    if verify:
        verify_paige(L, q, limits)
    return L


def verify_paige(L: CayleyTable, q: int, limits: EngineLimits = DEFAULT_LIMITS) -> None:
    """
    Raises:
        OracleFailure: L is not a simple nonassociative noncommutative Moufang loop
    """
    moufang = is_moufang(L, limits)
    if not moufang:
        raise OracleFailure(f"M*({q}) fails {moufang.note} at {moufang.witness}")
    if is_associative(L, limits):
        raise OracleFailure(f"M*({q}) is associative")
    if is_commutative(L, limits):
        raise OracleFailure(f"M*({q}) is commutative")
    if not is_simple(L, limits):
        raise OracleFailure(f"M*({q}) is not simple")
    logger.info(f"✅ M*({q}) verified: Moufang, simple, nonassociative, noncommutative")
