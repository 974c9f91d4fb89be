"""
Loop Constructions
==================

Builders for groups and Moufang loops used as inputs and test corpus:
cyclic groups, direct products, permutation groups (via sympy), the
quaternion group and Chein doubles M(G, 2).

Every builder returns a validated CayleyTable with identity 0.
"""

import logging
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation as SymPermutation
from sympy.combinatorics import PermutationGroup
from sympy.combinatorics.named_groups import AlternatingGroup, DihedralGroup, SymmetricGroup

from .errors import NotAGroup
from .loop_core import CayleyTable, inverse_array, normalize_identity, validate
from .varieties import is_associative


logger = logging.getLogger(__name__)


# =============================================================================
# ABELIAN BUILDERS
# =============================================================================

def cyclic_group(n: int) -> CayleyTable:
    """Z_n: addition mod n."""
    if n < 1:
        raise ValueError(f"Cyclic group order must be positive, got {n}")
    idx = np.arange(n)
    return validate((idx[:, None] + idx[None, :]) % n)


def direct_product(L1: CayleyTable, L2: CayleyTable) -> CayleyTable:
    """
    L1 × L2 with componentwise multiplication.

    The pair (i, j) is element i·|L2| + j, so (e1, e2) is element 0 when both
    factors are normalized.
    """
    L1, L2 = normalize_identity(L1), normalize_identity(L2)
    n1, n2 = L1.n, L2.n
    T1, T2 = L1.mul_table, L2.mul_table
    table = T1[:, None, :, None] * n2 + T2[None, :, None, :]
    return validate(table.reshape(n1 * n2, n1 * n2))


# =============================================================================
# PERMUTATION GROUPS
# =============================================================================

def _table_from_sympy(group: PermutationGroup) -> CayleyTable:
    """Cayley table of a sympy permutation group, elements sorted by image tuple."""
    perms = sorted((tuple(p.array_form) for p in group.elements))
    P = np.array(perms, dtype=np.int64)
    index = {p: i for i, p in enumerate(perms)}
    m = len(perms)
    # (a·b)(x) = b(a(x)), sympy's composition order
    table = np.empty((m, m), dtype=np.int64)
    for i in range(m):
        products = P[:, P[i]]
        table[i] = [index[tuple(row)] for row in products]
    return validate(table)


def permutation_group(generators: Iterable[Sequence[int]]) -> CayleyTable:
    """
    The group generated by permutations given as image lists.

    Example:
        >>> permutation_group([[1, 2, 0]]).n
        3
    """
    gens = [SymPermutation(list(g)) for g in generators]
    if not gens:
        return cyclic_group(1)
    size = max(g.size for g in gens)
    return _table_from_sympy(PermutationGroup([SymPermutation(g.array_form, size=size) for g in gens]))


def symmetric_group(k: int) -> CayleyTable:
    return _table_from_sympy(SymmetricGroup(k))


def alternating_group(k: int) -> CayleyTable:
    return _table_from_sympy(AlternatingGroup(k))


def dihedral_group(k: int) -> CayleyTable:
    """Symmetries of the regular k-gon, order 2k."""
    return _table_from_sympy(DihedralGroup(k))


# Unit quaternions ±1, ±i, ±j, ±k as (sign, basis) with basis 0..3 = 1, i, j, k
_QUATERNION_BASIS = [[(1, 0), (1, 1), (1, 2), (1, 3)],
                     [(1, 1), (-1, 0), (1, 3), (-1, 2)],
                     [(1, 2), (-1, 3), (-1, 0), (1, 1)],
                     [(1, 3), (1, 2), (-1, 1), (-1, 0)]]


def quaternion_group() -> CayleyTable:
    """Q_8 on 1, i, j, k, -1, -i, -j, -k (elements 0..7)."""
    table = np.empty((8, 8), dtype=np.int64)
    for x in range(8):
        for y in range(8):
            sign, basis = _QUATERNION_BASIS[x % 4][y % 4]
            if (x >= 4) != (y >= 4):
                sign = -sign
            table[x, y] = basis if sign > 0 else basis + 4
    return validate(table)


# =============================================================================
# CHEIN DOUBLE
# =============================================================================

def chein_double(G: CayleyTable) -> CayleyTable:
    """
    The Moufang loop M(G, 2) on G ∪ Gu, where gu is element |G| + g.

        g·h       = gh
        g·(hu)    = (hg)u
        (gu)·h    = (gh⁻¹)u
        (gu)·(hu) = h⁻¹g

    Nonassociative exactly when G is nonabelian.

    Raises:
        NotAGroup: G is not associative
    """
    G = normalize_identity(G)
    assoc = is_associative(G)
    if not assoc:
        raise NotAGroup(f"Chein double needs a group; associativity fails at {assoc.witness}")
    m = G.n
    T = G.mul_table
    inv = inverse_array(G)

    table = np.empty((2 * m, 2 * m), dtype=np.int64)
    table[:m, :m] = T
    table[:m, m:] = m + T.T                      # g·(hu) = (hg)u
    table[m:, :m] = m + T[:, inv]                # (gu)·h = (g h⁻¹)u
    table[m:, m:] = T[inv[None, :], np.arange(m)[:, None]]  # (gu)·(hu) = h⁻¹g
    logger.debug(f"Chein double of order {2 * m}")
    return validate(table)
