"""
Subloop Engine
==============

Subset closure, exhaustive subloop enumeration and the Lagrange checks.

Subsets are canonical Python-int bitsets (`SubsetMask`). Enumeration works
in rounds:

    1. SEED:   closure({x}) for every element x
    2. EXTEND: every proper subloop H found in the previous round is extended
               by each x outside H via closure(H ∪ {x})
    3. DEDUP:  results are merged into the found set by their bits
    4. SORT:   the final list is ordered by (order, sorted element tuple)

Only one x per left/right coset class of H is extended, since
closure(H ∪ {x}) = closure(H ∪ {hx}) = closure(H ∪ {xh}) for h in H.
"""

import os
import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import CapacityError, ConfigError, NotASubloop, OracleBoundExceeded
from .limits import DEFAULT_LIMITS, EngineLimits, ordered_map
from .loop_core import CayleyTable, Element, validate


logger = logging.getLogger(__name__)


# =============================================================================
# SUBSET MASK
# =============================================================================

@dataclass(frozen=True)
class SubsetMask:
    """
    A subset of [0, n) as an integer bitset (bit i set iff element i is a member).

    Attributes:
        bits: The bitset
        n: Capacity (order of the ambient loop)
    """
    bits: int
    n: int

    @classmethod
    def from_elements(cls, elements: Iterable[Element], n: int) -> "SubsetMask":
        bits = 0
        for x in elements:
            x = int(x)
            if not 0 <= x < n:
                raise ValueError(f"Element {x} outside [0, {n})")
            bits |= 1 << x
        return cls(bits, n)

    @classmethod
    def from_bool(cls, mask: np.ndarray) -> "SubsetMask":
        packed = np.packbits(np.asarray(mask, dtype=bool), bitorder='little')
        return cls(int.from_bytes(packed.tobytes(), 'little'), int(mask.size))

    @classmethod
    def full(cls, n: int) -> "SubsetMask":
        return cls((1 << n) - 1, n)

    @classmethod
    def singleton(cls, x: Element, n: int) -> "SubsetMask":
        return cls(1 << x, n)

    @property
    def order(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.order

    @cached_property
    def elements(self) -> Tuple[int, ...]:
        return tuple(int(x) for x in np.flatnonzero(self.to_bool()))

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def to_bool(self) -> np.ndarray:
        nbytes = max(1, (self.n + 7) // 8)
        raw = np.frombuffer(self.bits.to_bytes(nbytes, 'little'), dtype=np.uint8)
        return np.unpackbits(raw, bitorder='little')[:self.n].astype(bool)

    def to_array(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.int64)

    def __contains__(self, x: object) -> bool:
        return isinstance(x, (int, np.integer)) and 0 <= int(x) < self.n and bool((self.bits >> int(x)) & 1)

    def issubset(self, other: "SubsetMask") -> bool:
        return self.bits & other.bits == self.bits

    def union(self, other: "SubsetMask") -> "SubsetMask":
        return SubsetMask(self.bits | other.bits, self.n)

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """Canonical order: by size, then lexicographically by sorted elements."""
        return (self.order, self.elements)

    def __repr__(self) -> str:
        return "{" + ", ".join(map(str, self.elements)) + "}"


Subset = Union[SubsetMask, Iterable[Element]]


def as_mask(L: CayleyTable, subset: Subset) -> SubsetMask:
    if isinstance(subset, SubsetMask):
        if subset.n != L.n:
            raise ValueError(f"Subset capacity {subset.n} does not match order {L.n}")
        return subset
    return SubsetMask.from_elements(subset, L.n)


# =============================================================================
# LATTICE AND RESULTS
# =============================================================================

@dataclass
class SubloopLattice:
    """
    All subloops of a loop in canonical order, with strict containment.

    Attributes:
        n: Order of the ambient loop
        subloops: Canonically sorted subloops (first is {e}, last is L)
    """
    n: int
    subloops: List[SubsetMask]

    def __len__(self) -> int:
        return len(self.subloops)

    def __iter__(self) -> Iterator[SubsetMask]:
        return iter(self.subloops)

    @cached_property
    def containment(self) -> List[Tuple[int, int]]:
        """Pairs (i, j) with subloops[i] a proper subset of subloops[j]."""
        edges = []
        for j, big in enumerate(self.subloops):
            for i in range(j):
                small = self.subloops[i]
                if small.order < big.order and small.issubset(big):
                    edges.append((i, j))
        return edges

    def index_of(self, subset: SubsetMask) -> int:
        for i, s in enumerate(self.subloops):
            if s.bits == subset.bits:
                return i
        raise KeyError(subset)

    def orders(self) -> List[int]:
        return [s.order for s in self.subloops]


@dataclass(frozen=True)
class LagrangeResult:
    """
    Outcome of a weak or strong Lagrange check.

    Attributes:
        kind: "weak" or "strong"
        holds: True if the property holds
        witness: () when it holds; (K,) for a weak failure (|K| does not divide |L|);
                 (K, H) for a strong failure (K ⊂ H, |K| does not divide |H|)
    """
    kind: str
    holds: bool
    witness: Tuple[SubsetMask, ...] = ()

    def witness_elements(self) -> List[List[int]]:
        return [list(w.elements) for w in self.witness]


# =============================================================================
# CLOSURE
# =============================================================================

def _close(T: np.ndarray, mask: np.ndarray, frontier: np.ndarray) -> np.ndarray:
    """
    Close mask under multiplication in place.

    Products among members not in frontier must already lie in mask.
    """
    members = np.flatnonzero(mask)
    new = frontier
    while new.size:
        prods = np.concatenate([
            T[np.ix_(new, members)].ravel(),
            T[np.ix_(members, new)].ravel(),
        ])
        fresh = np.unique(prods[~mask[prods]])
        if fresh.size == 0:
            break
        mask[fresh] = True
        members = np.flatnonzero(mask)
        new = fresh
    return mask


def closure(L: CayleyTable, gens: Subset) -> SubsetMask:
    """
    Smallest product-closed subset containing gens and the identity.

    In a finite loop a product-closed subset containing e is a subloop.
    """
    gens = as_mask(L, gens)
    mask = gens.to_bool()
    mask[L.identity] = True
    return SubsetMask.from_bool(_close(L.mul_table, mask, np.flatnonzero(mask)))


def is_subloop(L: CayleyTable, subset: Subset) -> bool:
    """True iff subset contains e and is closed under multiplication."""
    subset = as_mask(L, subset)
    if L.identity not in subset:
        return False
    elems = subset.to_array()
    mask = subset.to_bool()
    return bool(mask[L.mul_table[np.ix_(elems, elems)]].all())


def subloop_table(L: CayleyTable, H: Subset) -> Tuple[CayleyTable, np.ndarray]:
    """
    The subloop H as a loop in its own right.

    Elements are renumbered with the identity first and the rest in ascending
    order.

    Returns:
        Tuple of (CayleyTable of order |H|, array mapping new index -> element of L)

    Raises:
        NotASubloop: H is not closed or misses the identity
    """
    H = as_mask(L, H)
    if not is_subloop(L, H):
        raise NotASubloop(f"{H} is not a subloop of the order-{L.n} loop")
    elems = [L.identity] + [x for x in H.elements if x != L.identity]
    elems = np.array(elems, dtype=np.int64)
    pos = np.full(L.n, -1, dtype=np.int64)
    pos[elems] = np.arange(elems.size)
    sub = pos[L.mul_table[np.ix_(elems, elems)]]
    return validate(sub), elems


# =============================================================================
# ENUMERATION
# =============================================================================

def _extend(T: np.ndarray, H: SubsetMask) -> List[int]:
    """Bits of closure(H ∪ {x}) for one x per coset class outside H."""
    base = H.to_bool()
    members = np.flatnonzero(base)
    skip = base.copy()
    results = []
    for x in range(H.n):
        if skip[x]:
            continue
        mask = base.copy()
        mask[x] = True
        _close(T, mask, np.array([x]))
        results.append(SubsetMask.from_bool(mask).bits)
        skip[T[members, x]] = True
        skip[T[x, members]] = True
    return results


def _seed(T: np.ndarray, n: int, identity: int, x: int) -> int:
    mask = np.zeros(n, dtype=bool)
    mask[identity] = True
    mask[x] = True
    return SubsetMask.from_bool(_close(T, mask, np.flatnonzero(mask))).bits


def _load_checkpoint(path: str, L: CayleyTable) -> Optional[Tuple[set, List[int], int]]:
    if not path or not os.path.exists(path):
        return None
    with open(path, 'r') as f:
        data = json.load(f)
    if data.get("digest") != L.digest:
        raise ConfigError(f"Checkpoint {path} was written for a different table")
    found = {int(h, 16) for h in data["found"]}
    frontier = [int(h, 16) for h in data["frontier"]]
    logger.info(f"💾 Resumed from {path}: round {data['round']}, {len(found)} subloops")
    return found, frontier, int(data["round"])


def _save_checkpoint(path: str, L: CayleyTable, found: set, frontier: List[int], rnd: int) -> None:
    data = {
        "digest": L.digest,
        "n": L.n,
        "round": rnd,
        "found": [format(b, 'x') for b in sorted(found)],
        "frontier": [format(b, 'x') for b in frontier],
    }
    tmp = path + ".tmp"
    with open(tmp, 'w') as f:
        json.dump(data, f)
    os.replace(tmp, path)


def all_subloops(L: CayleyTable,
                 limits: EngineLimits = DEFAULT_LIMITS,
                 checkpoint: Optional[str] = None) -> SubloopLattice:
    """
    Enumerate every subloop of L exactly once.

    Args:
        L: The loop
        limits: Subloop-count and queue caps, thread count
        checkpoint: Optional JSON path; state is saved after every round and
            resumed if the file exists for the same table

    Returns:
        SubloopLattice in canonical order

    Raises:
        CapacityError: More than limits.max_subloops subloops, or a round with
            more than limits.max_queue pending subloops
    """
    T = L.mul_table
    n = L.n
    full_bits = (1 << n) - 1

    resumed = _load_checkpoint(checkpoint, L) if checkpoint else None
    if resumed:
        found, frontier, rnd = resumed
    else:
        seeds = ordered_map(lambda x: _seed(T, n, L.identity, x), range(n), limits.threads)
        found = set()
        frontier = []
        for bits in seeds:
            if bits not in found:
                found.add(bits)
                if bits != full_bits:
                    frontier.append(bits)
        rnd = 0
        _check_caps(found, frontier, limits)

    while frontier:
        rnd += 1
        logger.debug(f"Round {rnd}: extending {len(frontier)} subloops ({len(found)} found)")
        extended = ordered_map(lambda b: _extend(T, SubsetMask(b, n)), frontier, limits.threads)
        next_frontier = []
        for batch in extended:
            for bits in batch:
                if bits not in found:
                    found.add(bits)
                    if bits != full_bits:
                        next_frontier.append(bits)
        frontier = next_frontier
        _check_caps(found, frontier, limits)
        if checkpoint:
            _save_checkpoint(checkpoint, L, found, frontier, rnd)

    subloops = sorted((SubsetMask(b, n) for b in found), key=lambda s: s.sort_key)
    logger.debug(f"Found {len(subloops)} subloops of the order-{n} loop in {rnd} rounds")
    return SubloopLattice(n=n, subloops=subloops)


def _check_caps(found: set, frontier: List[int], limits: EngineLimits) -> None:
    if len(found) > limits.max_subloops:
        raise CapacityError("subloop count", limits.max_subloops, len(found))
    if len(frontier) > limits.max_queue:
        raise CapacityError("queue size", limits.max_queue, len(frontier))


def brute_force_subloops(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> SubloopLattice:
    """
    Independent oracle: test every subset containing the identity.

    Raises:
        OracleBoundExceeded: n > limits.oracle_bound
    """
    n = L.n
    if n > limits.oracle_bound:
        raise OracleBoundExceeded(f"Powerset oracle limited to order {limits.oracle_bound}, got {n}")
    T = L.mul_table
    others = [x for x in range(n) if x != L.identity]
    found = []
    for choice in range(1 << len(others)):
        bits = 1 << L.identity
        for k, x in enumerate(others):
            if (choice >> k) & 1:
                bits |= 1 << x
        subset = SubsetMask(bits, n)
        elems = subset.to_array()
        mask = subset.to_bool()
        if mask[T[np.ix_(elems, elems)]].all():
            found.append(subset)
    found.sort(key=lambda s: s.sort_key)
    return SubloopLattice(n=n, subloops=found)


# =============================================================================
# LAGRANGE PROPERTIES
# =============================================================================

def weak_lagrange(L: CayleyTable,
                  lattice: Optional[SubloopLattice] = None,
                  limits: EngineLimits = DEFAULT_LIMITS) -> LagrangeResult:
    """
    Every subloop order divides |L|.

    On failure the witness is the canonically first subloop of non-dividing order.
    """
    lattice = lattice if lattice is not None else all_subloops(L, limits)
    for K in lattice:
        if L.n % K.order:
            return LagrangeResult("weak", False, (K,))
    return LagrangeResult("weak", True)


def strong_lagrange(L: CayleyTable,
                    lattice: Optional[SubloopLattice] = None,
                    limits: EngineLimits = DEFAULT_LIMITS) -> LagrangeResult:
    """
    For every containment K ⊆ H of subloops, |K| divides |H|.

    Equivalent to every subloop having the weak Lagrange property, because a
    subloop of a subloop of L is a subloop of L. The witness (K, H) is the
    first violating pair ordered by H, then K, canonically.
    """
    lattice = lattice if lattice is not None else all_subloops(L, limits)
    subloops = lattice.subloops
    for H in subloops:
        for K in subloops:
            if K.order >= H.order:
                break
            if H.order % K.order and K.issubset(H):
                return LagrangeResult("strong", False, (K, H))
    return LagrangeResult("strong", True)
