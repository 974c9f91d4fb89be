"""
Small-Order Census
==================

Exhaustive loop enumeration up to isomorphism, isomorphism testing, random
Latin-square completion and the order-10 search for a loop with the weak
but not the strong Lagrange property.

Normalized Latin squares (first row and column 0..n-1) are exactly the loops
on [0, n) with identity 0. Counts for n = 1..6:

    n          1   2   3   4   5     6
    squares    1   1   1   4   56    9408
    classes    1   1   1   2   6     109
"""

import logging
from collections import defaultdict
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BoundExceeded, SearchExhausted
from .limits import DEFAULT_LIMITS, EngineConstants, EngineLimits
from .loop_core import CayleyTable, normalize_identity, validate
from .subloops import SubsetMask, all_subloops, closure, strong_lagrange, weak_lagrange
from .varieties import is_associative, is_commutative


logger = logging.getLogger(__name__)


# =============================================================================
# NORMALIZED LATIN SQUARES
# =============================================================================

def normalized_latin_squares(n: int) -> Iterator[np.ndarray]:
    """
    Every Latin square of order n with first row and column 0..n-1.

    Cells are filled row by row in ascending value order, with a forward
    check that every empty cell of the touched row and column keeps a
    candidate. Squares are yielded in lexicographic order.
    """
    if n < 1:
        raise ValueError(f"Order must be positive, got {n}")
    full = (1 << n) - 1
    grid = np.zeros((n, n), dtype=np.int64)
    grid[0, :] = np.arange(n)
    grid[:, 0] = np.arange(n)
    row_used = [full] + [1 << r for r in range(1, n)]
    col_used = [full] + [1 << c for c in range(1, n)]
    cells = [(r, c) for r in range(1, n) for c in range(1, n)]

    def viable(r: int, c: int) -> bool:
        for cc in range(c + 1, n):
            if not full & ~(row_used[r] | col_used[cc]):
                return False
        for rr in range(r + 1, n):
            if not full & ~(row_used[rr] | col_used[c]):
                return False
        return True

    def fill(k: int) -> Iterator[np.ndarray]:
        if k == len(cells):
            yield grid.copy()
            return
        r, c = cells[k]
        free = full & ~(row_used[r] | col_used[c])
        for v in range(n):
            bit = 1 << v
            if not free & bit:
                continue
            grid[r, c] = v
            row_used[r] |= bit
            col_used[c] |= bit
            if viable(r, c):
                yield from fill(k + 1)
            row_used[r] &= ~bit
            col_used[c] &= ~bit

    yield from fill(0)


# =============================================================================
# ISOMORPHISM
# =============================================================================

def element_profiles(L: CayleyTable) -> List[Tuple[int, ...]]:
    """
    Isomorphism-invariant data per element: closure order, x·x = e, number of
    elements commuting with x, and number of pairs (y, z) with (xy)z = x(yz).
    """
    T = L.mul_table
    e = L.identity
    profiles = []
    for x in range(L.n):
        profiles.append((
            closure(L, [x]).order,
            int(T[x, x] == e),
            int(np.count_nonzero(T[x, :] == T[:, x])),
            int(np.count_nonzero(T[T[x, :], :] == T[x, T])),
        ))
    return profiles


def loop_invariant(L: CayleyTable) -> Tuple[Any, ...]:
    return (L.n, tuple(sorted(element_profiles(L))))


def _generators(L: CayleyTable) -> List[int]:
    """Greedy generating set: each new generator lies outside the closure so far."""
    gens: List[int] = []
    H = SubsetMask.singleton(L.identity, L.n)
    for x in range(L.n):
        if x not in H:
            gens.append(x)
            H = closure(L, gens)
    return gens


def _extend_map(L1: CayleyTable, L2: CayleyTable, images: Dict[int, int]) -> Optional[np.ndarray]:
    """Extend generator images multiplicatively; None on a conflict."""
    T1, T2 = L1.mul_table, L2.mul_table
    f = np.full(L1.n, -1, dtype=np.int64)
    f[L1.identity] = L2.identity
    for g, img in images.items():
        f[g] = img
    while True:
        known = np.flatnonzero(f >= 0)
        prods = T1[np.ix_(known, known)].ravel()
        imgs = T2[np.ix_(f[known], f[known])].ravel()
        clash = (f[prods] >= 0) & (f[prods] != imgs)
        if clash.any():
            return None
        fresh = f[prods] < 0
        if not fresh.any():
            break
        f[prods[fresh]] = imgs[fresh]
        # two different fresh products may claim the same element
        if not np.array_equal(f[prods], imgs):
            return None
    if (f < 0).any() or np.unique(f).size != L1.n:
        return None
    if not np.array_equal(f[T1], T2[f[:, None], f[None, :]]):
        return None
    return f


def find_isomorphism(L1: CayleyTable, L2: CayleyTable,
                     bound: int = EngineConstants.ISOMORPHISM_BOUND) -> Optional[np.ndarray]:
    """
    An isomorphism L1 -> L2 as an image array, or None.

    Raises:
        BoundExceeded: either order exceeds bound
    """
    if max(L1.n, L2.n) > bound:
        raise BoundExceeded(f"Isomorphism search limited to order {bound}")
    if L1.n != L2.n:
        return None
    L1, L2 = normalize_identity(L1), normalize_identity(L2)
    p1, p2 = element_profiles(L1), element_profiles(L2)
    if sorted(p1) != sorted(p2):
        return None

    gens = _generators(L1)
    candidates = [[y for y in range(L2.n) if p2[y] == p1[g]] for g in gens]

    def search(k: int, images: Dict[int, int]) -> Optional[np.ndarray]:
        if k == len(gens):
            return _extend_map(L1, L2, images)
        used = set(images.values())
        for y in candidates[k]:
            if y in used:
                continue
            images[gens[k]] = y
            found = search(k + 1, images)
            if found is not None:
                return found
            del images[gens[k]]
        return None

    return search(0, {})


def are_isomorphic(L1: CayleyTable, L2: CayleyTable,
                   bound: int = EngineConstants.ISOMORPHISM_BOUND) -> bool:
    """True iff some identity-fixing bijection is multiplicative."""
    return find_isomorphism(L1, L2, bound) is not None


def relabel(L: CayleyTable, sigma: Sequence[int]) -> CayleyTable:
    """The isomorphic copy of L under the element bijection sigma."""
    sigma = np.asarray(sigma, dtype=np.int64)
    table = np.empty((L.n, L.n), dtype=np.int64)
    table[np.ix_(sigma, sigma)] = sigma[L.mul_table]
    return validate(table)


# =============================================================================
# CENSUS
# =============================================================================

def enumerate_loops(n: int, bound: int = EngineConstants.CENSUS_BOUND) -> List[CayleyTable]:
    """
    One loop per isomorphism class of order n.

    Each class is represented by its first normalized Latin square in
    lexicographic order, so the result is deterministic.

    Raises:
        BoundExceeded: n > bound
    """
    if n > bound:
        raise BoundExceeded(f"Census limited to order {bound}, got {n}")
    reps: List[CayleyTable] = []
    buckets: Dict[Tuple[Any, ...], List[int]] = defaultdict(list)
    squares = 0
    for grid in normalized_latin_squares(n):
        squares += 1
        L = validate(grid)
        key = loop_invariant(L)
        if any(are_isomorphic(L, reps[i]) for i in buckets[key]):
            continue
        buckets[key].append(len(reps))
        reps.append(L)
    logger.info(f"Order {n}: {squares} normalized squares, {len(reps)} isomorphism classes")
    return reps


def has_element_of_order_two(L: CayleyTable) -> bool:
    """Some x ≠ e with x·x = e."""
    T = L.mul_table
    diag = T[np.arange(L.n), np.arange(L.n)]
    return bool(np.any((diag == L.identity) & (np.arange(L.n) != L.identity)))


def census_manifest(loops: Sequence[CayleyTable],
                    limits: EngineLimits = DEFAULT_LIMITS) -> Dict[str, Any]:
    """Class count and per-class flags for a census run."""
    classes = []
    for index, L in enumerate(loops):
        lattice = all_subloops(L, limits)
        classes.append({
            "index": index,
            "associative": is_associative(L, limits).holds,
            "commutative": is_commutative(L, limits).holds,
            "hasOrderTwo": has_element_of_order_two(L),
            "subloops": len(lattice),
            "weakLagrange": weak_lagrange(L, lattice).holds,
            "strongLagrange": strong_lagrange(L, lattice).holds,
        })
    order = loops[0].n if loops else 0
    return {"order": order, "classCount": len(classes), "classes": classes}


# =============================================================================
# RANDOM LOOPS
# =============================================================================

def random_loop(n: int, seed: int = 0) -> CayleyTable:
    """
    A random loop of order n with identity 0.

    Rows are added one at a time as random perfect matchings between columns
    and unused values. A Latin rectangle always extends, so no backtracking
    across rows is needed.
    """
    if n < 1:
        raise ValueError(f"Order must be positive, got {n}")
    rng = np.random.default_rng(seed)
    grid = np.zeros((n, n), dtype=np.int64)
    grid[0, :] = np.arange(n)
    grid[:, 0] = np.arange(n)
    col_used = np.zeros((n, n), dtype=bool)
    col_used[np.arange(n), np.arange(n)] = True

    for r in range(1, n):
        owner: Dict[int, int] = {}

        def augment(c: int, seen: set) -> bool:
            for v in rng.permutation(n):
                v = int(v)
                if v == r or col_used[c, v] or v in seen:
                    continue
                seen.add(v)
                if v not in owner or augment(owner[v], seen):
                    owner[v] = c
                    return True
            return False

        for c in rng.permutation(np.arange(1, n)):
            if not augment(int(c), set()):
                raise SearchExhausted(f"Row {r} of a random order-{n} loop has no completion")
        for v, c in owner.items():
            grid[r, c] = v
            col_used[c, v] = True
    return validate(grid)


# =============================================================================
# ORDER-10 SEARCH
# =============================================================================

def _canonical_non_lagrange_quintic() -> CayleyTable:
    for L in enumerate_loops(5):
        if has_element_of_order_two(L):
            return L
    raise SearchExhausted("No order-5 loop with an element of order 2")


def search_order10_counterexample(limits: EngineLimits = DEFAULT_LIMITS) -> CayleyTable:
    """
    An order-10 loop with the weak but not the strong Lagrange property.

    K (the first order-5 census loop with some x·x = e) sits on {0..4} and its
    complement C = {5..9} is a coset:

        k·(5+j) = 5 + K[k][j]      (5+j)·k = 5 + K[j][k]      (5+i)·(5+j) = D[i][j]

    For any Latin square D on K this is a loop. D is searched in lexicographic
    order with D[i][i] ≠ e, and accepted once every x in C generates the whole
    loop, which puts every proper subloop inside K.

    Raises:
        SearchExhausted: no completion satisfies the constraints
    """
    K = _canonical_non_lagrange_quintic()
    T = K.mul_table
    base = np.zeros((10, 10), dtype=np.int64)
    base[:5, :5] = T
    base[:5, 5:] = 5 + T
    base[5:, :5] = 5 + T
    K_mask = SubsetMask.from_elements(range(5), 10)
    tried = 0

    for D in _diagonal_free_squares(5, K.identity):
        tried += 1
        table = base.copy()
        table[5:, 5:] = D
        L = validate(table)
        if any(closure(L, [x]).order != 10 for x in range(5, 10)):
            continue
        lattice = all_subloops(L, limits)
        if not all(H.issubset(K_mask) for H in lattice.subloops[:-1]):
            continue
        logger.info(f"✅ Order-10 loop found after {tried} completions")
        return L
    raise SearchExhausted(f"No order-10 completion among {tried} candidates")


def _diagonal_free_squares(n: int, forbidden: int) -> Iterator[np.ndarray]:
    """Latin squares of order n on [0, n) with no diagonal entry equal to forbidden."""
    full = (1 << n) - 1
    grid = np.zeros((n, n), dtype=np.int64)
    row_used = [0] * n
    col_used = [0] * n

    def fill(k: int) -> Iterator[np.ndarray]:
        if k == n * n:
            yield grid.copy()
            return
        r, c = divmod(k, n)
        free = full & ~(row_used[r] | col_used[c])
        if r == c:
            free &= ~(1 << forbidden)
        for v in range(n):
            bit = 1 << v
            if not free & bit:
                continue
            grid[r, c] = v
            row_used[r] |= bit
            col_used[c] |= bit
            yield from fill(k + 1)
            row_used[r] &= ~bit
            col_used[c] &= ~bit

    yield from fill(0)
