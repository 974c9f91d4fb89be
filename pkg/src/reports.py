"""
Report Rendering
================

Turns engine results into the two output formats of the command line:

    text        human-readable, banner-delimited
    structured  JSON with sorted keys and fixed key names, byte-identical
                for identical inputs
"""

import json
from typing import Any, Dict, List

from .decision import Certificate, CertNode, render_certificate
from .subloops import LagrangeResult, SubloopLattice
from .varieties import PropertyReport


TEXT = "text"
STRUCTURED = "structured"
FORMATS = (TEXT, STRUCTURED)

BANNER = "=" * 70


# =============================================================================
# DOCUMENTS
# =============================================================================

def _node_document(node: CertNode) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "type": node.kind.value,
        "order": node.order,
        "conclusion": "holds" if node.holds else "fails",
        "witness": [list(w) for w in node.witness],
    }
    if node.normal is not None:
        doc["normal"] = list(node.normal)
    for name, child in node.children():
        doc[name] = _node_document(child)
    return doc


def to_document(obj: Any, lattice_edges: bool = False) -> Dict[str, Any]:
    """Structured document for any reportable result."""
    if isinstance(obj, PropertyReport):
        return {"kind": "properties", **obj.to_dict()}
    if isinstance(obj, SubloopLattice):
        doc = {
            "kind": "subloops",
            "order": obj.n,
            "count": len(obj),
            "subloops": [list(s.elements) for s in obj],
        }
        if lattice_edges:
            doc["containment"] = [list(edge) for edge in obj.containment]
        return doc
    if isinstance(obj, Certificate):
        return {
            "kind": "certificate",
            "property": obj.prop,
            "conclusion": "holds" if obj.holds else "fails",
            "witness": [list(w) for w in obj.root.witness],
            "tree": _node_document(obj.root),
        }
    if isinstance(obj, LagrangeResult):
        return {
            "kind": "lagrange",
            "property": obj.kind,
            "conclusion": "holds" if obj.holds else "fails",
            "witness": obj.witness_elements(),
        }
    if isinstance(obj, dict):
        return obj
    raise TypeError(f"Cannot report {type(obj).__name__}")


# =============================================================================
# TEXT
# =============================================================================

def _text_properties(report: PropertyReport) -> List[str]:
    doc = report.to_dict()
    lines = ["LOOP PROPERTIES", BANNER]
    for key, value in doc["flags"].items():
        mark = "-" if value is None else ("yes" if value else "no")
        lines.append(f"  {key:<20} {mark}")
    lines.append(BANNER)
    for key, value in doc["parameters"].items():
        lines.append(f"  {key:<20} {'-' if value is None else value}")
    if doc["witnesses"]:
        lines.append(BANNER)
        for key, witness in doc["witnesses"].items():
            note = doc["notes"].get(key)
            suffix = f"  ({note})" if note else ""
            lines.append(f"  {key:<20} {witness}{suffix}")
    return lines


def _text_lattice(lattice: SubloopLattice, lattice_edges: bool) -> List[str]:
    lines = [f"SUBLOOPS OF THE ORDER-{lattice.n} LOOP: {len(lattice)}", BANNER]
    for i, s in enumerate(lattice):
        lines.append(f"  [{i}] order {s.order}: {s}")
    if lattice_edges:
        lines.append(BANNER)
        lines.extend(f"  {i} < {j}" for i, j in lattice.containment)
    return lines


def emit_report(obj: Any, fmt: str = TEXT, lattice_edges: bool = False) -> str:
    """
    Render a result in the requested format (no trailing newline).

    Args:
        obj: PropertyReport, SubloopLattice, Certificate, LagrangeResult or a plain dict
        fmt: "text" or "structured"
        lattice_edges: Include the containment relation of a lattice
    """
    if fmt == STRUCTURED:
        return json.dumps(to_document(obj, lattice_edges), sort_keys=True, indent=4)
    if fmt != TEXT:
        raise ValueError(f"Unknown report format '{fmt}'")

    if isinstance(obj, PropertyReport):
        return "\n".join(_text_properties(obj))
    if isinstance(obj, SubloopLattice):
        return "\n".join(_text_lattice(obj, lattice_edges))
    if isinstance(obj, Certificate):
        verdict = "HOLDS" if obj.holds else "FAILS"
        lines = [f"{obj.prop.upper()} LAGRANGE: {verdict}", BANNER, render_certificate(obj)]
        return "\n".join(lines)
    doc = to_document(obj)
    return "\n".join(f"{key}: {doc[key]}" for key in sorted(doc))
