"""
Variety Predicates
==================

Identity-based variety membership, structural series and the aggregated
PropertyReport.

Every identity is checked exhaustively. For each outer element x the whole
n×n slab over (y, z) is compared at once with numpy, and the first violating
triple in lexicographic order is returned as the witness. Threads split the
outer index into contiguous chunks; the witness does not depend on them.

Identities:
    right Bol   ((xy)z)y = x((yz)y)
    left Bol    (x(yx))z = x(y(xz))
    Moufang     left Bol and right Bol
    AIP         (xy)⁻¹ = x⁻¹y⁻¹
    Bruck       Bol (either side) with AIP; B-loop = Bruck of odd order
"""

import logging
from dataclasses import dataclass, field
from math import lcm
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from .errors import NotMoufang, NotPowerAssociative, NucleusNotNormal
from .limits import DEFAULT_LIMITS, EngineLimits, chunked, ordered_map
from .loop_core import CayleyTable, Element, inverse_array
from .normality import (
    InnerGenerators,
    center,
    is_normal,
    minimal_normal_subloop,
    normal_closure,
    nucleus,
    quotient,
)
from .subloops import (
    SubloopLattice,
    SubsetMask,
    all_subloops,
    closure,
    strong_lagrange,
    subloop_table,
    weak_lagrange,
)


logger = logging.getLogger(__name__)


# =============================================================================
# CHECK RESULT
# =============================================================================

@dataclass(frozen=True)
class Check:
    """
    A predicate outcome with its witness.

    Attributes:
        name: Predicate name (report key)
        holds: Outcome
        witness: Element indices of the first violation (empty when it holds)
        note: Which sub-identity or condition failed, when that is not obvious
    """
    name: str
    holds: bool
    witness: Tuple[int, ...] = ()
    note: str = ""

    def __bool__(self) -> bool:
        return self.holds


def _first_violation(n: int, slab: Callable[[int], np.ndarray],
                     threads: int = 1) -> Optional[Tuple[int, ...]]:
    """
    Scan outer index x in order; slab(x) marks violations over the inner indices.
    """
    def scan(block: range) -> Optional[Tuple[int, ...]]:
        for x in block:
            bad = slab(x)
            if bad.any():
                idx = np.argwhere(bad)[0]
                return (x,) + tuple(int(i) for i in idx)
        return None

    if threads <= 1:
        return scan(range(n))
    for found in ordered_map(scan, chunked(n, threads), threads):
        if found is not None:
            return found
    return None


def _check(name: str, n: int, slab: Callable[[int], np.ndarray], threads: int) -> Check:
    witness = _first_violation(n, slab, threads)
    return Check(name, witness is None, witness or ())


# =============================================================================
# IDENTITIES
# =============================================================================

def is_associative(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Check:
    """(xy)z = x(yz) for all x, y, z; witness (x, y, z)."""
    T = L.mul_table
    return _check("associative", L.n, lambda x: T[T[x, :], :] != T[x, T], limits.threads)


def is_commutative(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Check:
    """xy = yx for all x, y; witness (x, y)."""
    T = L.mul_table
    return _check("commutative", L.n, lambda x: T[x, :] != T[:, x], limits.threads)


def is_right_bol(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Check:
    """((xy)z)y = x((yz)y); witness (x, y, z)."""
    T = L.mul_table
    ys = np.arange(L.n)[:, None]
    rhs_inner = T[T, ys]  # (yz)y over (y, z)

    def slab(x: int) -> np.ndarray:
        lhs = T[T[T[x, :], :], ys]
        rhs = T[x, rhs_inner]
        return lhs != rhs

    return _check("rightBol", L.n, slab, limits.threads)


def is_left_bol(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Check:
    """(x(yx))z = x(y(xz)); witness (x, y, z)."""
    T = L.mul_table
    ys = np.arange(L.n)[:, None]

    def slab(x: int) -> np.ndarray:
        lhs = T[T[x, T[:, x]], :]
        rhs = T[x, T[ys, T[x, :][None, :]]]
        return lhs != rhs

    return _check("leftBol", L.n, slab, limits.threads)


def is_moufang(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Check:
    """Left Bol and right Bol."""
    left = is_left_bol(L, limits)
    if not left:
        return Check("moufang", False, left.witness, "leftBol")
    right = is_right_bol(L, limits)
    if not right:
        return Check("moufang", False, right.witness, "rightBol")
    return Check("moufang", True)


def is_bol(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Check:
    """Bol on either side; the witness is the right Bol violation."""
    right = is_right_bol(L, limits)
    if right:
        return Check("bol", True, note="rightBol")
    left = is_left_bol(L, limits)
    if left:
        return Check("bol", True, note="leftBol")
    return Check("bol", False, right.witness, "rightBol")


def has_aip(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Check:
    """
    (xy)⁻¹ = x⁻¹y⁻¹; witness (x, y), or (x,) for an element lacking a two-sided inverse.
    """
    inv = inverse_array(L)
    missing = np.flatnonzero(inv < 0)
    if missing.size:
        return Check("aip", False, (int(missing[0]),), "no two-sided inverse")
    T = L.mul_table
    return _check("aip", L.n, lambda x: inv[T[x, :]] != T[inv[x], inv], limits.threads)


def is_bruck(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Check:
    bol = is_bol(L, limits)
    if not bol:
        return Check("bruck", False, bol.witness, bol.note)
    aip = has_aip(L, limits)
    if not aip:
        return Check("bruck", False, aip.witness, "aip")
    return Check("bruck", True)


def is_b_loop(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Check:
    """Bruck loop of odd order; an even order is reported with witness (n,)."""
    bruck = is_bruck(L, limits)
    if not bruck:
        return Check("bLoop", False, bruck.witness, bruck.note)
    if L.n % 2 == 0:
        return Check("bLoop", False, (L.n,), "even order")
    return Check("bLoop", True)


def _automorphism_violation(T: np.ndarray, maps: np.ndarray) -> Optional[Tuple[int, int, int]]:
    """First (row, a, b) with maps[row](ab) != maps[row](a)·maps[row](b)."""
    n = T.shape[0]
    step = max(1, (1 << 21) // max(1, n * n))
    for start in range(0, maps.shape[0], step):
        P = maps[start:start + step]
        lhs = P[:, T]
        rhs = T[P[:, :, None], P[:, None, :]]
        bad = lhs != rhs
        if bad.any():
            r, a, b = np.argwhere(bad)[0]
            return start + int(r), int(a), int(b)
    return None


def is_a_loop(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Check:
    """
    Every inner mapping is an automorphism.

    Checked on the generators only: automorphisms form a group. The witness is
    (x, a, b) for T(x) or (x, y, a, b) for L(x,y)/R(x,y); note names the generator.
    """
    T = L.mul_table
    gens = InnerGenerators(L)
    found = _automorphism_violation(T, gens.t_images())
    if found:
        x, a, b = found
        return Check("aLoop", False, (x, a, b), f"T({x})")

    def scan(block: range) -> Optional[Check]:
        for x in block:
            for kind, maps in (("L", gens.l_images(x)), ("R", gens.r_images(x))):
                found = _automorphism_violation(T, maps)
                if found:
                    y, a, b = found
                    return Check("aLoop", False, (x, y, a, b), f"{kind}({x},{y})")
        return None

    for result in ordered_map(scan, chunked(L.n, limits.threads), limits.threads):
        if result is not None:
            return result
    return Check("aLoop", True)


# =============================================================================
# ELEMENT ORDERS
# =============================================================================

def element_order(L: CayleyTable, x: Element) -> int:
    """|closure({x})|; for x ≠ e, order 2 means x·x = e."""
    return closure(L, [x]).order


def _left_powers(L: CayleyTable, x: Element) -> np.ndarray:
    """e, x, x·x, (x·x)·x, ... up to (not including) the return to e."""
    T = L.mul_table
    powers = [L.identity]
    p = T[L.identity, x]
    while p != L.identity:
        powers.append(int(p))
        p = T[p, x]
    return np.array(powers, dtype=np.int64)


def _generates_cyclic_group(L: CayleyTable, x: Element) -> bool:
    P = _left_powers(L, x)
    m = P.size
    if closure(L, [x]).order != m:
        return False
    idx = np.arange(m)
    return bool(np.array_equal(L.mul_table[np.ix_(P, P)], P[(idx[:, None] + idx[None, :]) % m]))


def is_power_associative(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Check:
    """closure({x}) is a cyclic group generated by x, for every x; witness (x,)."""
    def scan(block: range) -> Optional[int]:
        for x in block:
            if not _generates_cyclic_group(L, x):
                return x
        return None

    for bad in ordered_map(scan, chunked(L.n, limits.threads), limits.threads):
        if bad is not None:
            return Check("powerAssociative", False, (bad,))
    return Check("powerAssociative", True)


def exponent(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> int:
    """
    lcm of element orders.

    Raises:
        NotPowerAssociative: exponent is undefined for this loop
    """
    pa = is_power_associative(L, limits)
    if not pa:
        raise NotPowerAssociative(f"Element {pa.witness[0]} does not generate a cyclic group")
    return lcm(*(element_order(L, x) for x in range(L.n)))


# =============================================================================
# DERIVED AND CENTRAL SERIES
# =============================================================================

def derived_subloop(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> SubsetMask:
    """
    Smallest normal subloop with an abelian group quotient.

    Normal closure of every commutator deviation c (xy = (yx)c) and every
    associator deviation a ((xy)z = (x(yz))a).
    """
    T, LD, n = L.mul_table, L.ldiv_table, L.n
    seeds = np.zeros(n, dtype=bool)
    seeds[LD[T.T, T].ravel()] = True

    def associators(block: range) -> np.ndarray:
        hit = np.zeros(n, dtype=bool)
        for x in block:
            hit[LD[T[x, T], T[T[x, :], :]].ravel()] = True
        return hit

    for hit in ordered_map(associators, chunked(n, limits.threads), limits.threads):
        seeds |= hit
    seeds[L.identity] = False
    return normal_closure(L, np.flatnonzero(seeds))


def _lift(elements: np.ndarray, sub: SubsetMask, n: int) -> SubsetMask:
    return SubsetMask.from_elements(elements[sub.to_array()], n)


def derived_series(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> List[SubsetMask]:
    """L = L⁽⁰⁾ ⊇ L⁽¹⁾ ⊇ ... until the series stabilizes; every term as a subset of L."""
    series = [SubsetMask.full(L.n)]
    while True:
        current = series[-1]
        sub, elements = subloop_table(L, current)
        nxt = _lift(elements, derived_subloop(sub, limits), L.n)
        if nxt.bits == current.bits:
            return series
        series.append(nxt)


def is_solvable(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> bool:
    return derived_series(L, limits)[-1].order == 1


def derived_length(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Optional[int]:
    """Number of derived steps down to {e}, or None if L is not solvable."""
    series = derived_series(L, limits)
    return len(series) - 1 if series[-1].order == 1 else None


def upper_central_series(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> List[SubsetMask]:
    """Z₀ = {e}, Z_{i+1} = preimage of center(L/Z_i), until stable."""
    series = [SubsetMask.singleton(L.identity, L.n)]
    while True:
        qmap = quotient(L, series[-1], limits)
        nxt = qmap.preimage(center(qmap.quotient, limits))
        if nxt.bits == series[-1].bits:
            return series
        series.append(nxt)


def is_nilpotent(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Tuple[bool, Optional[int]]:
    """(nilpotent, class); class counts the steps of the upper central series."""
    series = upper_central_series(L, limits)
    if series[-1].order == L.n:
        return True, len(series) - 1
    return False, None


# =============================================================================
# SPECIAL CLASSES
# =============================================================================

def _normal_nucleus(L: CayleyTable, limits: EngineLimits) -> SubsetMask:
    nuc = nucleus(L, limits)
    if not is_normal(L, nuc, limits):
        raise NucleusNotNormal(f"Nucleus {nuc} is not normal")
    return nuc


def m_k_class(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS,
              strict: bool = False) -> Optional[int]:
    """
    k such that L/Nuc(L) has exponent exactly k - 1.

    Returns None for non-Moufang loops, or raises NotMoufang when strict.

    Raises:
        NucleusNotNormal: the nucleus is not normal (never for Moufang loops)
    """
    if not is_moufang(L, limits):
        if strict:
            raise NotMoufang("M_k classes are defined for Moufang loops only")
        return None
    nuc = _normal_nucleus(L, limits)
    return exponent(quotient(L, nuc, limits).quotient, limits) + 1


def is_central_bol(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Check:
    """
    Bol loop whose derived subloop lies in the center.

    The witness is the Bol violation, or the first element of the derived
    subloop outside the center.
    """
    bol = is_bol(L, limits)
    if not bol:
        return Check("centralBol", False, bol.witness, "bol")
    Z = center(L, limits)
    outside = [x for x in derived_subloop(L, limits).elements if x not in Z]
    if outside:
        return Check("centralBol", False, (outside[0],), "derived subloop not central")
    return Check("centralBol", True)


def is_nuclearly_nilpotent_class2(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Check:
    """
    L/Nuc(L) is a group.

    The witness is a nonassociative triple of the quotient, lifted to the
    least element of each coset.

    Raises:
        NucleusNotNormal: the nucleus is not normal
    """
    nuc = _normal_nucleus(L, limits)
    qmap = quotient(L, nuc, limits)
    assoc = is_associative(qmap.quotient, limits)
    if assoc:
        return Check("nuclearClass2", True)
    lifted = tuple(qmap.cosets[b].elements[0] for b in assoc.witness)
    return Check("nuclearClass2", False, lifted, "quotient by nucleus not associative")


def simplicity_check(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Check:
    """is_simple with the minimal normal subloop as witness."""
    if L.n == 1:
        return Check("simple", False, (L.identity,), "trivial loop")
    N = minimal_normal_subloop(L, limits)
    if N is None:
        return Check("simple", True)
    return Check("simple", False, N.elements, "proper normal subloop")


# =============================================================================
# PROPERTY REPORT
# =============================================================================

FLAG_KEYS = (
    "associative", "commutative", "leftBol", "rightBol", "moufang", "aip",
    "bruck", "bLoop", "aLoop", "powerAssociative", "simple", "solvable",
    "nilpotent", "weakLagrange", "strongLagrange", "centralBol", "nuclearClass2",
)

PARAMETER_KEYS = ("order", "nilpotencyClass", "derivedLength", "exponent", "mK")


@dataclass
class PropertyReport:
    """
    Aggregated predicates for one loop.

    Attributes:
        flags: FLAG_KEYS -> bool (None when skipped)
        parameters: PARAMETER_KEYS -> int or None
        witnesses: failed flag -> witness element tuples
        notes: failed flag -> which sub-condition failed
    """
    flags: Dict[str, Optional[bool]] = field(default_factory=dict)
    parameters: Dict[str, Optional[int]] = field(default_factory=dict)
    witnesses: Dict[str, List[List[int]]] = field(default_factory=dict)
    notes: Dict[str, str] = field(default_factory=dict)

    def record(self, check: Check, key: Optional[str] = None) -> bool:
        key = key or check.name
        self.flags[key] = check.holds
        if not check.holds:
            self.witnesses[key] = [list(check.witness)]
            if check.note:
                self.notes[key] = check.note
        return check.holds

    def to_dict(self) -> Dict[str, Any]:
        return {
            "flags": {k: self.flags.get(k) for k in FLAG_KEYS},
            "parameters": {k: self.parameters.get(k) for k in PARAMETER_KEYS},
            "witnesses": {k: self.witnesses[k] for k in sorted(self.witnesses)},
            "notes": {k: self.notes[k] for k in sorted(self.notes)},
        }


def property_report(L: CayleyTable,
                    limits: EngineLimits = DEFAULT_LIMITS,
                    lattice: Optional[SubloopLattice] = None,
                    include_lagrange: bool = True) -> PropertyReport:
    """
    Evaluate every predicate on L.

    Args:
        L: The loop
        limits: Caps and thread count
        lattice: Precomputed subloop lattice, if available
        include_lagrange: Enumerate subloops for the Lagrange flags
    """
    report = PropertyReport()
    report.parameters["order"] = L.n

    report.record(is_associative(L, limits))
    report.record(is_commutative(L, limits))
    left = report.record(is_left_bol(L, limits))
    right = report.record(is_right_bol(L, limits))
    report.flags["moufang"] = left and right
    if not report.flags["moufang"]:
        report.witnesses["moufang"] = report.witnesses.get("leftBol") or report.witnesses["rightBol"]
        report.notes["moufang"] = "leftBol" if not left else "rightBol"
    report.record(has_aip(L, limits))
    report.record(is_bruck(L, limits))
    report.record(is_b_loop(L, limits))
    report.record(is_a_loop(L, limits))
    power = report.record(is_power_associative(L, limits))
    report.record(simplicity_check(L, limits))

    series = derived_series(L, limits)
    solvable = series[-1].order == 1
    report.flags["solvable"] = solvable
    report.parameters["derivedLength"] = len(series) - 1 if solvable else None
    if not solvable:
        report.witnesses["solvable"] = [list(series[-1].elements)]
        report.notes["solvable"] = "derived series stabilizes at a nontrivial subloop"

    nilpotent, nil_class = is_nilpotent(L, limits)
    report.flags["nilpotent"] = nilpotent
    report.parameters["nilpotencyClass"] = nil_class
    if not nilpotent:
        report.witnesses["nilpotent"] = [list(upper_central_series(L, limits)[-1].elements)]
        report.notes["nilpotent"] = "upper central series stabilizes below L"

    report.parameters["exponent"] = exponent(L, limits) if power else None
    report.parameters["mK"] = m_k_class(L, limits) if report.flags["moufang"] else None

    report.record(is_central_bol(L, limits))
    try:
        report.record(is_nuclearly_nilpotent_class2(L, limits))
    except NucleusNotNormal:
        report.flags["nuclearClass2"] = False
        report.witnesses["nuclearClass2"] = [list(nucleus(L, limits).elements)]
        report.notes["nuclearClass2"] = "nucleus not normal"

    if include_lagrange:
        lattice = lattice if lattice is not None else all_subloops(L, limits)
        for key, result in (("weakLagrange", weak_lagrange(L, lattice)),
                            ("strongLagrange", strong_lagrange(L, lattice))):
            report.flags[key] = result.holds
            if not result.holds:
                report.witnesses[key] = result.witness_elements()
    logger.debug(f"Property report for order {L.n} complete")
    return report
