"""
Lagrange Decision Procedure
===========================

Decides the weak or strong Lagrange property by induction on the order,
producing a certificate that can be re-verified from tables alone.

Reduction rule (one direction only):
    If N is a normal subloop of L and both N and L/N have the weak (resp.
    strong) Lagrange property, so does L.

So for non-simple L the canonical minimal normal subloop N is split off and
both N and L/N are decided recursively. When both hold, L holds
(DECOMPOSE). When either fails nothing follows, and L is checked directly
against its subloop lattice (FALLBACK). Simple and trivial loops are
checked directly (SIMPLE).

Certificate text format (two spaces of indent per level, children in the
order sub, quot):

    certificate strong
    fallback order=10 N=0,1,2,3,4 fails witness=0,2|0,1,2,3,4
      simple order=5 fails witness=0,2|0,1,2,3,4
      simple order=2 holds
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

from .errors import InvalidCertificate, LoopError, NucleusNotNormal
from .limits import DEFAULT_LIMITS, EngineLimits
from .loop_core import CayleyTable
from .normality import (
    center,
    is_normal,
    minimal_normal_subloop,
    nucleus,
    quotient,
)
from .subloops import (
    LagrangeResult,
    SubloopLattice,
    SubsetMask,
    all_subloops,
    is_subloop,
    strong_lagrange,
    subloop_table,
    weak_lagrange,
)
from .varieties import (
    derived_subloop,
    is_a_loop,
    is_bruck,
    is_central_bol,
    is_commutative,
    is_moufang,
    is_nilpotent,
    is_nuclearly_nilpotent_class2,
    is_solvable,
)


logger = logging.getLogger(__name__)

WEAK = "weak"
STRONG = "strong"


# =============================================================================
# CERTIFICATE TYPES
# =============================================================================

class NodeKind(Enum):
    SIMPLE = "simple"
    DECOMPOSE = "decompose"
    FALLBACK = "fallback"


@dataclass
class CertNode:
    """
    One step of the induction.

    Attributes:
        kind: SIMPLE, DECOMPOSE or FALLBACK
        order: Order of the loop this node speaks about
        holds: Conclusion at this node
        witness: Element tuples of the failing subloop(s) when holds is False
        normal: The normal subloop split off (DECOMPOSE, FALLBACK)
        sub: Certificate for the normal subloop
        quot: Certificate for the quotient
    """
    kind: NodeKind
    order: int
    holds: bool
    witness: Tuple[Tuple[int, ...], ...] = ()
    normal: Optional[Tuple[int, ...]] = None
    sub: Optional["CertNode"] = None
    quot: Optional["CertNode"] = None

    def children(self) -> List[Tuple[str, "CertNode"]]:
        return [(name, node) for name, node in (("sub", self.sub), ("quot", self.quot)) if node is not None]

    def depth(self) -> int:
        return 1 + max((child.depth() for _, child in self.children()), default=0)


@dataclass
class Certificate:
    """A decision for one property; root.holds is the answer."""
    prop: str
    root: CertNode

    @property
    def holds(self) -> bool:
        return self.root.holds


# =============================================================================
# DECISION
# =============================================================================

def _direct(L: CayleyTable, prop: str, limits: EngineLimits,
            lattice: Optional[SubloopLattice] = None) -> LagrangeResult:
    lattice = lattice if lattice is not None else all_subloops(L, limits)
    return strong_lagrange(L, lattice) if prop == STRONG else weak_lagrange(L, lattice)


def _witness(result: LagrangeResult) -> Tuple[Tuple[int, ...], ...]:
    return tuple(w.elements for w in result.witness)


def _decide(L: CayleyTable, prop: str, limits: EngineLimits) -> CertNode:
    N = minimal_normal_subloop(L, limits) if L.n > 1 else None
    if N is None:
        result = _direct(L, prop, limits)
        return CertNode(NodeKind.SIMPLE, L.n, result.holds, _witness(result))

    sub_table, _ = subloop_table(L, N)
    sub = _decide(sub_table, prop, limits)
    quot = _decide(quotient(L, N, limits).quotient, prop, limits)
    if sub.holds and quot.holds:
        return CertNode(NodeKind.DECOMPOSE, L.n, True, normal=N.elements, sub=sub, quot=quot)

    logger.debug(f"Order {L.n}: reduction inconclusive, checking directly")
    result = _direct(L, prop, limits)
    return CertNode(NodeKind.FALLBACK, L.n, result.holds, _witness(result),
                    normal=N.elements, sub=sub, quot=quot)


def decide_weak(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Certificate:
    """Decide the weak Lagrange property with a certificate."""
    return Certificate(WEAK, _decide(L, WEAK, limits))


def decide_strong(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> Certificate:
    """Decide the strong Lagrange property with a certificate."""
    return Certificate(STRONG, _decide(L, STRONG, limits))


def decide(L: CayleyTable, strong: bool = False, limits: EngineLimits = DEFAULT_LIMITS) -> Certificate:
    return decide_strong(L, limits) if strong else decide_weak(L, limits)


# =============================================================================
# VERIFICATION
# =============================================================================

def _check_witness(L: CayleyTable, prop: str, witness: Tuple[Tuple[int, ...], ...], path: str) -> None:
    try:
        sets = [SubsetMask.from_elements(w, L.n) for w in witness]
    except ValueError as exc:
        raise InvalidCertificate(path, f"witness out of range: {exc}")
    expected = 2 if prop == STRONG else 1
    if len(sets) != expected:
        raise InvalidCertificate(path, f"{prop} witness needs {expected} subloop(s), got {len(sets)}")
    for s in sets:
        if not is_subloop(L, s):
            raise InvalidCertificate(path, f"witness {s} is not a subloop")
    if prop == WEAK:
        if L.n % sets[0].order == 0:
            raise InvalidCertificate(path, f"witness order {sets[0].order} divides {L.n}")
    else:
        K, H = sets
        if not K.issubset(H) or H.order % K.order == 0:
            raise InvalidCertificate(path, f"witness {K} in {H} is not a violation")


def _verify_node(L: CayleyTable, node: CertNode, prop: str, path: str,
                 limits: EngineLimits, audit: bool) -> None:
    if node.order != L.n:
        raise InvalidCertificate(path, f"order {node.order} does not match loop of order {L.n}")
    if node.holds and node.witness:
        raise InvalidCertificate(path, "a holding node carries a witness")
    if not node.holds:
        _check_witness(L, prop, node.witness, path)

    if node.kind == NodeKind.SIMPLE:
        if node.children() or node.normal is not None:
            raise InvalidCertificate(path, "simple node with a decomposition")
        if L.n > 1 and minimal_normal_subloop(L, limits) is not None:
            raise InvalidCertificate(path, "loop is not simple")
        if _direct(L, prop, limits).holds != node.holds:
            raise InvalidCertificate(path, "conclusion contradicts the direct check")
        return

    if node.normal is None or node.sub is None or node.quot is None:
        raise InvalidCertificate(path, f"{node.kind.value} node needs N and two children")
    try:
        N = SubsetMask.from_elements(node.normal, L.n)
    except ValueError as exc:
        raise InvalidCertificate(path, f"N out of range: {exc}")
    if N.order in (1, L.n):
        raise InvalidCertificate(path, f"N = {N} is not a nontrivial proper subloop")
    try:
        if not is_normal(L, N, limits):
            raise InvalidCertificate(path, f"N = {N} is not normal")
        sub_table, _ = subloop_table(L, N)
        quot_table = quotient(L, N, limits).quotient
    except InvalidCertificate:
        raise
    except LoopError as exc:
        raise InvalidCertificate(path, f"N = {N}: {exc}")

    _verify_node(sub_table, node.sub, prop, path + "/sub", limits, audit)
    _verify_node(quot_table, node.quot, prop, path + "/quot", limits, audit)

    both = node.sub.holds and node.quot.holds
    if node.kind == NodeKind.DECOMPOSE:
        if not both:
            raise InvalidCertificate(path, "decompose node with a failing child")
        if not node.holds:
            raise InvalidCertificate(path, "decompose node must conclude holds")
        if audit and not _direct(L, prop, limits).holds:
            raise InvalidCertificate(path, "reduction rule violated by the direct check")
    else:
        if both:
            raise InvalidCertificate(path, "fallback node where the reduction applies")
        if _direct(L, prop, limits).holds != node.holds:
            raise InvalidCertificate(path, "conclusion contradicts the direct check")


def verify_certificate(L: CayleyTable, cert: Union[Certificate, str],
                       limits: EngineLimits = DEFAULT_LIMITS, audit: bool = False) -> bool:
    """
    Re-check every node of a certificate against L.

    Args:
        L: The loop the certificate was produced for
        cert: Certificate tree or its text rendering
        limits: Caps for the direct checks
        audit: Also run the direct check at DECOMPOSE nodes

    Returns:
        True

    Raises:
        InvalidCertificate: path names the first failing node
    """
    if isinstance(cert, str):
        cert = parse_certificate(cert)
    if cert.prop not in (WEAK, STRONG):
        raise InvalidCertificate("root", f"unknown property '{cert.prop}'")
    _verify_node(L, cert.root, cert.prop, "root", limits, audit)
    return True


# =============================================================================
# TEXT FORMAT
# =============================================================================

def _fmt_set(elements: Tuple[int, ...]) -> str:
    return ",".join(str(x) for x in elements)


def render_certificate(cert: Certificate) -> str:
    """Indented text rendering (no trailing newline)."""
    lines = [f"certificate {cert.prop}"]

    def walk(node: CertNode, depth: int) -> None:
        parts = [node.kind.value, f"order={node.order}"]
        if node.normal is not None:
            parts.append(f"N={_fmt_set(node.normal)}")
        parts.append("holds" if node.holds else "fails")
        if node.witness:
            parts.append("witness=" + "|".join(_fmt_set(w) for w in node.witness))
        lines.append("  " * depth + " ".join(parts))
        for _, child in node.children():
            walk(child, depth + 1)

    walk(cert.root, 0)
    return "\n".join(lines)


def _parse_set(text: str, where: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",")) if text else ()
    except ValueError:
        raise InvalidCertificate(where, f"bad element list '{text}'")


def _parse_line(line_num: int, body: str) -> CertNode:
    where = f"line {line_num}"
    parts = body.split()
    try:
        kind = NodeKind(parts[0])
    except ValueError:
        raise InvalidCertificate(where, f"unknown node type '{parts[0]}'")
    fields = {}
    conclusion = None
    for part in parts[1:]:
        if part in ("holds", "fails"):
            conclusion = part == "holds"
        elif "=" in part:
            key, value = part.split("=", 1)
            fields[key] = value
        else:
            raise InvalidCertificate(where, f"unexpected token '{part}'")
    if conclusion is None or "order" not in fields:
        raise InvalidCertificate(where, "node needs order= and holds/fails")
    try:
        order = int(fields["order"])
    except ValueError:
        raise InvalidCertificate(where, f"bad order '{fields['order']}'")
    witness = tuple(_parse_set(w, where) for w in fields["witness"].split("|")) if "witness" in fields else ()
    normal = _parse_set(fields["N"], where) if "N" in fields else None
    return CertNode(kind, order, conclusion, witness, normal)


def parse_certificate(text: str) -> Certificate:
    """
    Parse the text rendering back into a tree.

    Raises:
        InvalidCertificate: malformed text (path is "line N")
    """
    lines = [(num, line.rstrip()) for num, line in enumerate(text.splitlines(), 1)
             if line.strip() and not line.lstrip().startswith('#')]
    if not lines:
        raise InvalidCertificate("line 1", "empty certificate")
    num, header = lines[0]
    head = header.split()
    if len(head) != 2 or head[0] != "certificate":
        raise InvalidCertificate(f"line {num}", "expected 'certificate weak|strong'")

    root: Optional[CertNode] = None
    stack: List[Tuple[int, CertNode]] = []
    for num, line in lines[1:]:
        indent = len(line) - len(line.lstrip(" "))
        if indent % 2:
            raise InvalidCertificate(f"line {num}", "indent must be a multiple of two spaces")
        depth = indent // 2
        node = _parse_line(num, line.strip())
        while stack and stack[-1][0] >= depth:
            stack.pop()
        if not stack:
            if root is not None or depth != 0:
                raise InvalidCertificate(f"line {num}", "certificate has more than one root")
            root = node
        else:
            parent_depth, parent = stack[-1]
            if depth != parent_depth + 1:
                raise InvalidCertificate(f"line {num}", "indent skips a level")
            if parent.sub is None:
                parent.sub = node
            elif parent.quot is None:
                parent.quot = node
            else:
                raise InvalidCertificate(f"line {num}", "node has more than two children")
        stack.append((depth, node))
    if root is None:
        raise InvalidCertificate(f"line {num}", "certificate has no nodes")
    return Certificate(head[1], root)


# =============================================================================
# SUFFICIENT CONDITIONS FOR STRONG LAGRANGE
# =============================================================================

def _odd_index_associative_normal(L: CayleyTable, limits: EngineLimits) -> Optional[SubsetMask]:
    """An associative normal subloop of odd index among {e}, Z(L) and Nuc(L)."""
    candidates = [SubsetMask.singleton(L.identity, L.n), center(L, limits)]
    nuc = nucleus(L, limits)
    if is_normal(L, nuc, limits):
        candidates.append(nuc)
    for N in sorted(candidates, key=lambda s: s.sort_key, reverse=True):
        if (L.n // N.order) % 2 == 1:
            return N
    return None


def strong_lagrange_reasons(L: CayleyTable, limits: EngineLimits = DEFAULT_LIMITS) -> List[str]:
    """
    Structural reasons that guarantee the strong Lagrange property.

    Each reason names the condition that was checked:

        solvable            the derived series reaches {e}
        nilpotent           the upper central series reaches L
        derivedStrong       L' is proper and the subloop L' itself has the strong
                            property, checked on its own subloop lattice
        centralBol          L is Bol and L' lies inside the center
        commutativeMoufang  L is a commutative Moufang loop
        aLoopNuclearClass2  L is an A-loop, Nuc(L) is normal and L/Nuc(L) is a group
        moufangOddIndex     L is Moufang with an associative normal subloop of odd index
        bruckOddIndex       L is Bruck with an associative normal subloop of odd index

    An empty list means no listed condition applies, not that the property fails.
    """
    reasons = []
    if is_solvable(L, limits):
        reasons.append("solvable")
    if is_nilpotent(L, limits)[0]:
        reasons.append("nilpotent")

    derived = derived_subloop(L, limits)
    if derived.order < L.n:
        sub, _ = subloop_table(L, derived)
        if strong_lagrange(sub, all_subloops(sub, limits)).holds:
            reasons.append("derivedStrong")

    if is_central_bol(L, limits):
        reasons.append("centralBol")
    moufang = is_moufang(L, limits).holds
    if moufang and is_commutative(L, limits):
        reasons.append("commutativeMoufang")
    if is_a_loop(L, limits):
        try:
            if is_nuclearly_nilpotent_class2(L, limits):
                reasons.append("aLoopNuclearClass2")
        except NucleusNotNormal:
            pass

    bruck = is_bruck(L, limits).holds
    if moufang or bruck:
        K = _odd_index_associative_normal(L, limits)
        if K is not None:
            if moufang:
                reasons.append("moufangOddIndex")
            if bruck:
                reasons.append("bruckOddIndex")
    return reasons
