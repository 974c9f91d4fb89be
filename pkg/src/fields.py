"""
Small Finite Fields
===================

GF(q) for q in {2, 3, 4, 5, 7, 8, 9}, with precomputed addition and
multiplication tables so Zorn matrix arithmetic can be done on whole numpy
batches at once.

Element encoding:
    Prime q:   the residue itself.
    q = p^k:   the polynomial c₀ + c₁x + ... + c_{k-1}x^{k-1} over GF(p) is the
               integer c₀ + c₁p + ... + c_{k-1}p^{k-1}, reduced modulo a fixed
               irreducible:

               GF(4)  x² + x + 1
               GF(8)  x³ + x + 1
               GF(9)  x² + 1

So 0 and 1 are always the field's zero and one.
"""

import logging
from functools import lru_cache
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np
from sympy import factorint

from .errors import UnsupportedOrder
from .limits import EngineConstants


logger = logging.getLogger(__name__)


# Monic irreducibles, coefficients from x⁰ upwards
IRREDUCIBLES = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (1, 0, 1),
}


def prime_power(q: int) -> Tuple[int, int]:
    """
    (p, k) with q = p^k.

    Raises:
        UnsupportedOrder: q is not a prime power
    """
    if q < 2:
        raise UnsupportedOrder(f"{q} is not a prime power")
    factors = factorint(q)
    if len(factors) != 1:
        raise UnsupportedOrder(f"{q} is not a prime power")
    (p, k), = factors.items()
    return int(p), int(k)


# =============================================================================
# FIELD
# =============================================================================

class GaloisField:
    """
    GF(q) with table arithmetic.

    Attributes:
        q: Field order
        p: Characteristic
        k: Degree over GF(p)
        add_table, mul_table: q×q int64 arrays
        neg_table: additive inverses
        inv_table: multiplicative inverses (inv_table[0] = -1)

    Example:
        >>> F = gf(4)
        >>> x = 2                      # the polynomial x
        >>> F.mul(x, x) == F.add(x, 1) # x² = x + 1
        True
    """

    def __init__(self, q: int):
        if q not in EngineConstants.FIELD_ORDERS:
            raise UnsupportedOrder(f"GF({q}) is not supported; choose from {EngineConstants.FIELD_ORDERS}")
        self.q = q
        self.p, self.k = prime_power(q)
        self.modulus = IRREDUCIBLES.get(q)

        digits = np.array([self._digits(a) for a in range(q)], dtype=np.int64)
        weights = self.p ** np.arange(self.k)
        self.add_table = ((digits[:, None, :] + digits[None, :, :]) % self.p) @ weights
        self.mul_table = np.array(
            [[self._poly_mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64
        )
        self.neg_table = ((-digits) % self.p) @ weights

        self.inv_table = np.full(q, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.mul_table == 1)
        self.inv_table[rows] = cols

        for name in ("add_table", "mul_table", "neg_table", "inv_table"):
            getattr(self, name).setflags(write=False)
        logger.debug(f"Built GF({q}) tables (p={self.p}, k={self.k})")

    def _digits(self, a: int) -> List[int]:
        return [(a // self.p ** i) % self.p for i in range(self.k)]

    def _encode(self, coeffs: Sequence[int]) -> int:
        return sum(int(c) * self.p ** i for i, c in enumerate(coeffs))

    def _poly_mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] += x * y
        for deg in range(len(prod) - 1, self.k - 1, -1):
            c = prod[deg] % self.p
            if c:
                for i, m in enumerate(self.modulus):
                    prod[deg - self.k + i] -= c * m
        return self._encode([c % self.p for c in prod[:self.k]])

    # -------------------------------------------------------------------------
    # Scalar operations
    # -------------------------------------------------------------------------

    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.q})")
        return int(self.inv_table[a])

    # -------------------------------------------------------------------------
    # Vector operations on arrays of shape (..., 3)
    # -------------------------------------------------------------------------

    def vadd(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.add_table[u, v]

    def vsub(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.add_table[u, self.neg_table[v]]

    def scale(self, s: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.mul_table[np.asarray(s)[..., None], v]

    def dot(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        M, A = self.mul_table, self.add_table
        return A[A[M[u[..., 0], v[..., 0]], M[u[..., 1], v[..., 1]]], M[u[..., 2], v[..., 2]]]

    def cross(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        M = self.mul_table
        parts = [self.vsub(M[u[..., a], v[..., b]], M[u[..., b], v[..., a]])
                 for a, b in ((1, 2), (2, 0), (0, 1))]
        return np.stack(parts, axis=-1)

    def __repr__(self) -> str:
        return f"GaloisField({self.q})"


@lru_cache(maxsize=None)
def gf(q: int) -> GaloisField:
    """Shared field context for GF(q)."""
    return GaloisField(q)


# =============================================================================
# VECTORS
# =============================================================================

class Vec3(NamedTuple):
    """A vector of three field elements."""
    x: int
    y: int
    z: int

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=np.int64)


def dot(F: GaloisField, u: Vec3, v: Vec3) -> int:
    return int(F.dot(u.as_array(), v.as_array()))


def cross(F: GaloisField, u: Vec3, v: Vec3) -> Vec3:
    return Vec3(*(int(c) for c in F.cross(u.as_array(), v.as_array())))
