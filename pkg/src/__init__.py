"""
LoopWorks: Finite Loop Toolkit
==============================

Exact computation with finite loops given as Cayley tables: validation,
subloop lattices, normal structure and quotients, variety predicates,
Paige loops and other constructions, and a certificate-producing decision
procedure for the weak and strong Lagrange properties.

Core Components:
    - loop_core: CayleyTable, validation, .tbl format
    - subloops: closure, subloop enumeration, Lagrange checks
    - normality: inner mappings, normal subloops, quotients, center, nucleus
    - varieties: Bol/Moufang/Bruck/A-loop predicates, series, PropertyReport
    - fields, paige: GF(q), Zorn matrices, Paige loops M*(q)
    - constructions, census: groups, Chein doubles, small-order census
    - decision: Lagrange certificates

Example:
    >>> from src import paige_loop, decide_weak, verify_certificate
    >>>
    >>> L = paige_loop(2)              # order 120
    >>> cert = decide_weak(L)
    >>> cert.holds
    True
    >>> verify_certificate(L, cert)
    True
"""

from .errors import LoopError, CapacityError, InvalidCertificate
from .limits import EngineConstants, EngineLimits

from .loop_core import (
    CayleyTable,
    Permutation,
    validate,
    parse_table,
    serialize_table,
    read_table,
    write_table,
)

from .subloops import (
    SubsetMask,
    SubloopLattice,
    closure,
    all_subloops,
    weak_lagrange,
    strong_lagrange,
)

from .normality import (
    is_normal,
    normal_closure,
    quotient,
    is_simple,
    center,
    nucleus,
)

from .varieties import (
    PropertyReport,
    property_report,
    is_moufang,
)

from .paige import paige_loop, paige_order
from .constructions import cyclic_group, direct_product, chein_double
from .census import enumerate_loops, are_isomorphic, search_order10_counterexample

from .decision import (
    Certificate,
    decide_weak,
    decide_strong,
    verify_certificate,
)

__version__ = "1.0.0"
__author__ = "LoopWorks"

__all__ = [
    # Errors and limits
    "LoopError",
    "CapacityError",
    "InvalidCertificate",
    "EngineConstants",
    "EngineLimits",
    # Tables
    "CayleyTable",
    "Permutation",
    "validate",
    "parse_table",
    "serialize_table",
    "read_table",
    "write_table",
    # Subloops
    "SubsetMask",
    "SubloopLattice",
    "closure",
    "all_subloops",
    "weak_lagrange",
    "strong_lagrange",
    # Normal structure
    "is_normal",
    "normal_closure",
    "quotient",
    "is_simple",
    "center",
    "nucleus",
    # Varieties
    "PropertyReport",
    "property_report",
    "is_moufang",
    # Constructions
    "paige_loop",
    "paige_order",
    "cyclic_group",
    "direct_product",
    "chein_double",
    "enumerate_loops",
    "are_isomorphic",
    "search_order10_counterexample",
    # Decision
    "Certificate",
    "decide_weak",
    "decide_strong",
    "verify_certificate",
]
