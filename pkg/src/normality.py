"""
Normal Structure
================

Inner mappings, normal subloops, quotients, simplicity, center and nucleus.

A subloop N is normal iff it is invariant under the inner mapping group.
The group is generated by

    T(x)   = L_x⁻¹ ∘ R_x                 z -> x \\ (z·x)
    L(x,y) = L_{yx}⁻¹ ∘ L_y ∘ L_x        z -> (y·x) \\ (y·(x·z))
    R(x,y) = R_{xy}⁻¹ ∘ R_y ∘ R_x        z -> ((z·x)·y) / (x·y)

so invariance is only checked against these 2n² + n generators.

Normal closures are computed as the identity class of the congruence
generated by the pairs (e, s); congruence classes of a normal subloop N are
exactly the cosets xN.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import NotASubloop, NotNormal
from .limits import DEFAULT_LIMITS, EngineLimits, chunked, ordered_map, parallel_all
from .loop_core import CayleyTable, Permutation, validate
from .subloops import (
    Subset,
    SubloopLattice,
    SubsetMask,
    all_subloops,
    as_mask,
    is_subloop,
)


logger = logging.getLogger(__name__)


# =============================================================================
# INNER MAPPING GENERATORS
# =============================================================================

class InnerGenerators:
    """
    The generating set {T(x), L(x,y), R(x,y)} of the inner mapping group.

    Maps are produced in batches of n rows on demand; materializing all
    2n² + n permutations is only done through `as_array()` for small loops.

    Example:
        >>> gens = inner_generators(L)
        >>> len(gens) == 2 * L.n ** 2 + L.n
        True
        >>> all(p.fixes(0) for p in gens)
        True
    """

    def __init__(self, L: CayleyTable):
        self.L = L

    def __len__(self) -> int:
        return 2 * self.L.n ** 2 + self.L.n

    def t_images(self, points: Optional[np.ndarray] = None) -> np.ndarray:
        """Row x holds T(x) restricted to points."""
        T, LD, n = self.L.mul_table, self.L.ldiv_table, self.L.n
        pts = np.arange(n) if points is None else points
        xs = np.arange(n)[:, None]
        return LD[xs, T[pts[None, :], xs]]

    def l_images(self, x: int, points: Optional[np.ndarray] = None) -> np.ndarray:
        """Row y holds L(x, y) restricted to points."""
        T, LD, n = self.L.mul_table, self.L.ldiv_table, self.L.n
        pts = np.arange(n) if points is None else points
        ys = np.arange(n)[:, None]
        yxz = T[ys, T[x, pts][None, :]]
        return LD[T[:, x][:, None], yxz]

    def r_images(self, x: int, points: Optional[np.ndarray] = None) -> np.ndarray:
        """Row y holds R(x, y) restricted to points."""
        T, RD, n = self.L.mul_table, self.L.rdiv_table, self.L.n
        pts = np.arange(n) if points is None else points
        ys = np.arange(n)[:, None]
        zxy = T[T[pts, x][None, :], ys]
        return RD[T[x, :][:, None], zxy]

    def batches(self) -> Iterator[np.ndarray]:
        yield self.t_images()
        for x in range(self.L.n):
            yield self.l_images(x)
            yield self.r_images(x)

    def __iter__(self) -> Iterator[Permutation]:
        for batch in self.batches():
            for row in batch:
                yield Permutation(row)

    def as_array(self) -> np.ndarray:
        return np.concatenate(list(self.batches()), axis=0)


def inner_generators(L: CayleyTable) -> InnerGenerators:
    return InnerGenerators(L)


# =============================================================================
# NORMALITY
# =============================================================================

def is_normal(L: CayleyTable, N: Subset, limits: EngineLimits = DEFAULT_LIMITS) -> bool:
    """
    True iff every inner generator maps N onto itself.

    Raises:
        NotASubloop: N is not a subloop of L
    """
    N = as_mask(L, N)
    if not is_subloop(L, N):
        raise NotASubloop(f"{N} is not a subloop")
    if N.order in (1, L.n):
        return True
    gens = InnerGenerators(L)
    pts = N.to_array()
    inside = N.to_bool()

    # Conjugations reject most non-normal subloops cheaply
    if not inside[gens.t_images(pts)].all():
        return False

    def invariant(block: range) -> bool:
        for x in block:
            if not inside[gens.l_images(x, pts)].all():
                return False
            if not inside[gens.r_images(x, pts)].all():
                return False
        return True

    return parallel_all(invariant, chunked(L.n, limits.threads), limits.threads)


def _congruence_labels(L: CayleyTable, seeds: np.ndarray) -> np.ndarray:
    """
    Class labels of the smallest congruence identifying every seed with e.

    Compatibility with multiplication is enough: on a finite Latin square it
    forces compatibility with both divisions.
    """
    n = L.n
    T = L.mul_table
    e = L.identity
    arange = np.arange(n)
    u = np.full(seeds.size, e, dtype=np.int64)
    v = seeds.astype(np.int64)
    ncomp, labels = _components(n, u, v)
    while True:
        rep = np.full(ncomp, n, dtype=np.int64)
        np.minimum.at(rep, labels, arange)
        rep_of = rep[labels]
        movers = np.flatnonzero(rep_of != arange)
        if movers.size == 0:
            return labels
        anchors = rep_of[movers]
        u = np.concatenate([movers, T[movers, :].ravel(), T[:, movers].T.ravel()])
        v = np.concatenate([anchors, T[anchors, :].ravel(), T[:, anchors].T.ravel()])
        new_ncomp, labels = _components(n, u, v)
        if new_ncomp == ncomp:
            return labels
        ncomp = new_ncomp


def _components(n: int, u: np.ndarray, v: np.ndarray):
    graph = coo_matrix((np.ones(u.size, dtype=np.int8), (u, v)), shape=(n, n))
    return connected_components(graph, directed=False)


def normal_closure(L: CayleyTable, S: Subset) -> SubsetMask:
    """Smallest normal subloop of L containing S."""
    S = as_mask(L, S)
    labels = _congruence_labels(L, S.to_array())
    return SubsetMask.from_bool(labels == labels[L.identity])


def all_normal_subloops(L: CayleyTable,
                        lattice: Optional[SubloopLattice] = None,
                        limits: EngineLimits = DEFAULT_LIMITS) -> List[SubsetMask]:
    """Normal members of the subloop lattice, in canonical order."""
    lattice = lattice if lattice is not None else all_subloops(L, limits)
    flags = ordered_map(lambda H: is_normal(L, H), lattice.subloops, limits.threads)
    return [H for H, ok in zip(lattice.subloops, flags) if ok]


def is_simple(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> bool:
    """
    True iff n > 1 and the normal closure of every x ≠ e is all of L.

    Per-element closures avoid a full lattice enumeration.
    """
    if L.n == 1:
        return False
    others = [x for x in range(L.n) if x != L.identity]

    def generates(x: int) -> bool:
        return normal_closure(L, [x]).order == L.n

    return parallel_all(generates, others, limits.threads)


def minimal_normal_subloop(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Optional[SubsetMask]:
    """
    Canonically first nontrivial proper normal subloop (smallest order, then
    lexicographic), or None if L is simple or trivial.

    Every minimum-order nontrivial normal subloop is the normal closure of
    one of its nonidentity elements, so scanning per-element closures is enough.
    """
    others = [x for x in range(L.n) if x != L.identity]
    closures = ordered_map(lambda x: normal_closure(L, [x]), others, limits.threads)
    proper = [N for N in closures if N.order < L.n]
    if not proper:
        return None
    return min(proper, key=lambda s: s.sort_key)


# =============================================================================
# QUOTIENTS
# =============================================================================

@dataclass
class QuotientMap:
    """
    The natural map L -> L/N.

    Attributes:
        normal: The normal subloop N
        cosets: Blocks xN, the identity block first, then by minimum element
        block_of: block_of[x] = index of the coset containing x
        quotient: Cayley table of L/N on block indices
    """
    normal: SubsetMask
    cosets: List[SubsetMask]
    block_of: np.ndarray
    quotient: CayleyTable

    def preimage(self, blocks: Subset) -> SubsetMask:
        """Union of the cosets indexed by blocks."""
        blocks = as_mask(self.quotient, blocks)
        return SubsetMask.from_bool(blocks.to_bool()[self.block_of])

    def image(self, subset: SubsetMask) -> SubsetMask:
        return SubsetMask.from_elements(set(self.block_of[subset.to_array()].tolist()), self.quotient.n)


def quotient(L: CayleyTable, N: Subset, limits: EngineLimits = DEFAULT_LIMITS) -> QuotientMap:
    """
    Build L/N on the cosets of N.

    Raises:
        NotASubloop: N is not a subloop
        NotNormal: N is not normal in L
    """
    N = as_mask(L, N)
    if not is_normal(L, N, limits):
        raise NotNormal(f"{N} is not a normal subloop")
    T = L.mul_table
    pts = N.to_array()
    coset_min = T[:, pts].min(axis=1)
    mins = np.unique(coset_min)
    identity_min = coset_min[L.identity]
    ordered = np.concatenate([[identity_min], mins[mins != identity_min]])
    rank = np.full(L.n, -1, dtype=np.int64)
    rank[ordered] = np.arange(ordered.size)
    block_of = rank[coset_min]
    reps = ordered
    table = block_of[T[np.ix_(reps, reps)]]
    cosets = [SubsetMask.from_bool(block_of == b) for b in range(ordered.size)]
    return QuotientMap(normal=N, cosets=cosets, block_of=block_of, quotient=validate(table))


# =============================================================================
# CENTER AND NUCLEUS
# =============================================================================

def _nuclear_flags(L: CayleyTable, limits: EngineLimits) -> np.ndarray:
    T = L.mul_table
    n = L.n
    col = np.arange(n)[:, None]

    def check(block: range) -> List[bool]:
        flags = []
        for a in block:
            left = np.array_equal(T[T[a, :], :], T[a, T])
            middle = left and np.array_equal(T[T[:, a], :], T[col, T[a, :][None, :]])
            right = middle and np.array_equal(T[T, a], T[col, T[:, a][None, :]])
            flags.append(bool(right))
        return flags

    parts = ordered_map(check, chunked(n, limits.threads), limits.threads)
    return np.array([f for part in parts for f in part], dtype=bool)


def nucleus(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> SubsetMask:
    """Elements a with (ax)y = a(xy), (xa)y = x(ay) and (xy)a = x(ya) for all x, y."""
    return SubsetMask.from_bool(_nuclear_flags(L, limits))


def center(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> SubsetMask:
    """Nuclear elements that commute with everything."""
    T = L.mul_table
    commuting = np.all(T == T.T, axis=1)
    return SubsetMask.from_bool(_nuclear_flags(L, limits) & commuting)
