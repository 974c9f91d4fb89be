"""
LoopWorks Command Line
======================

    loopworks validate FILE
    loopworks props FILE [--skip-lagrange]
    loopworks subloops FILE [--lattice]
    loopworks lagrange FILE [--strong] [--certificate OUT]
    loopworks quotient FILE --normal "i,j,..." -o OUT
    loopworks paige Q -o OUT
    loopworks group cyclic N | product F1 F2 | chein FILE
                  | symmetric K | alternating K | dihedral K | quaternion  -o OUT
    loopworks census N -o DIR
    loopworks search-order10 -o OUT

Common options: --threads, --max-subloops, --max-queue, --format, --checkpoint,
-v/--verbose, -q/--quiet.

Exit codes:
    0  success, or the property holds
    1  the property fails (witness emitted)
    2  invalid input
    3  resource cap hit
    4  internal consistency failure

Reports go to stdout; progress and errors go to stderr.
"""

import os
import sys
import json
import logging
import argparse
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, TextIO

from .census import census_manifest, enumerate_loops, search_order10_counterexample
from .constructions import (
    alternating_group,
    chein_double,
    cyclic_group,
    dihedral_group,
    direct_product,
    quaternion_group,
    symmetric_group,
)
from .decision import decide, render_certificate
from .errors import ConfigError, LoopError, exit_code_for
from .limits import EngineLimits
from .loop_core import CayleyTable, read_table, write_table
from .normality import quotient
from .paige import paige_loop
from .reports import FORMATS, TEXT, emit_report
from .subloops import all_subloops
from .varieties import property_report


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILS = 1


# =============================================================================
# RUN CONFIGURATION
# =============================================================================

@dataclass
class RunConfig:
    """
    One command invocation.

    Attributes:
        command: Subcommand name
        args: Command-specific arguments
        limits: Resolved caps and thread count
        fmt: Report format ("text" or "structured")
        checkpoint: Subloop enumeration checkpoint path
    """
    command: str
    args: Dict[str, Any] = field(default_factory=dict)
    limits: EngineLimits = field(default_factory=EngineLimits)
    fmt: str = TEXT
    checkpoint: Optional[str] = None

    def __post_init__(self):
        if self.fmt not in FORMATS:
            raise ConfigError(f"Unknown format '{self.fmt}'")

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        limits = EngineLimits.from_env(
            threads=ns.threads,
            max_subloops=ns.max_subloops,
            max_queue=ns.max_queue,
        )
        common = {"command", "threads", "max_subloops", "max_queue", "format",
                  "checkpoint", "verbose", "quiet"}
        args = {k: v for k, v in vars(ns).items() if k not in common}
        return cls(ns.command, args, limits, ns.format, ns.checkpoint)


# =============================================================================
# COMMANDS
# =============================================================================

def _emit(text: str, out: TextIO) -> None:
    out.write(text + "\n")


def _parse_elements(text: str) -> List[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise ConfigError(f"--normal expects comma-separated integers, got '{text}'")


def _write(L: CayleyTable, path: str, comments: List[str], config: RunConfig, out: TextIO) -> int:
    write_table(L, path, comments)
    logger.info(f"💾 Saved: {path}")
    _emit(emit_report({"kind": "table", "order": L.n, "path": path}, config.fmt), out)
    return EXIT_OK


def cmd_validate(config: RunConfig, out: TextIO) -> int:
    L = read_table(config.args["file"])
    doc = {"kind": "validate", "order": L.n, "valid": True}
    if L.relabeling:
        doc["relabeling"] = list(L.relabeling)
    _emit(emit_report(doc, config.fmt), out)
    return EXIT_OK


def cmd_props(config: RunConfig, out: TextIO) -> int:
    L = read_table(config.args["file"])
    include = not config.args.get("skip_lagrange", False)
    lattice = all_subloops(L, config.limits, config.checkpoint) if include else None
    report = property_report(L, config.limits, lattice, include_lagrange=include)
    _emit(emit_report(report, config.fmt), out)
    return EXIT_OK


def cmd_subloops(config: RunConfig, out: TextIO) -> int:
    L = read_table(config.args["file"])
    lattice = all_subloops(L, config.limits, config.checkpoint)
    _emit(emit_report(lattice, config.fmt, lattice_edges=config.args.get("lattice", False)), out)
    return EXIT_OK


def cmd_lagrange(config: RunConfig, out: TextIO) -> int:
    L = read_table(config.args["file"])
    cert = decide(L, strong=config.args.get("strong", False), limits=config.limits)
    target = config.args.get("certificate")
    if target:
        with open(target, 'w') as f:
            f.write(render_certificate(cert) + "\n")
        logger.info(f"💾 Certificate saved: {target}")
    _emit(emit_report(cert, config.fmt), out)
    return EXIT_OK if cert.holds else EXIT_FAILS


def cmd_quotient(config: RunConfig, out: TextIO) -> int:
    L = read_table(config.args["file"])
    qmap = quotient(L, _parse_elements(config.args["normal"]), config.limits)
    path = config.args["output"]
    write_table(qmap.quotient, path, [f"quotient by N = {qmap.normal}"])
    with open(path + ".cosets", 'w') as f:
        for x, block in enumerate(qmap.block_of.tolist()):
            f.write(f"{x} {block}\n")
    logger.info(f"💾 Saved: {path} and {path}.cosets")
    doc = {"kind": "quotient", "order": qmap.quotient.n, "normal": list(qmap.normal.elements),
           "cosets": [list(c.elements) for c in qmap.cosets], "path": path}
    _emit(emit_report(doc, config.fmt), out)
    return EXIT_OK


def cmd_paige(config: RunConfig, out: TextIO) -> int:
    q = config.args["q"]
    L = paige_loop(q, config.limits)
    return _write(L, config.args["output"], [f"Paige loop M*({q})"], config, out)


def cmd_group(config: RunConfig, out: TextIO) -> int:
    kind = config.args["kind"]
    params = config.args.get("params", [])

    def need(count: int) -> List[str]:
        if len(params) != count:
            raise ConfigError(f"group {kind} takes {count} argument(s), got {len(params)}")
        return params

    def integer(text: str) -> int:
        try:
            return int(text)
        except ValueError:
            raise ConfigError(f"group {kind}: '{text}' is not an integer")

    if kind == "cyclic":
        L = cyclic_group(integer(need(1)[0]))
    elif kind == "product":
        f1, f2 = need(2)
        L = direct_product(read_table(f1), read_table(f2))
    elif kind == "chein":
        L = chein_double(read_table(need(1)[0]))
    elif kind == "symmetric":
        L = symmetric_group(integer(need(1)[0]))
    elif kind == "alternating":
        L = alternating_group(integer(need(1)[0]))
    elif kind == "dihedral":
        L = dihedral_group(integer(need(1)[0]))
    else:
        need(0)
        L = quaternion_group()
    return _write(L, config.args["output"], [f"group {kind} {' '.join(params)}".strip()], config, out)


def cmd_census(config: RunConfig, out: TextIO) -> int:
    n = config.args["n"]
    directory = config.args["output"]
    os.makedirs(directory, exist_ok=True)
    loops = enumerate_loops(n)
    manifest = census_manifest(loops, config.limits)
    width = len(str(max(0, len(loops) - 1)))
    for i, L in enumerate(loops):
        write_table(L, os.path.join(directory, f"loop{n}_{i:0{width}d}.tbl"), [f"order {n} class {i}"])
    with open(os.path.join(directory, "manifest.json"), 'w') as f:
        json.dump(manifest, f, sort_keys=True, indent=4)
    logger.info(f"💾 Saved {len(loops)} tables and manifest.json to {directory}")
    _emit(emit_report(manifest, config.fmt), out)
    return EXIT_OK


def cmd_search_order10(config: RunConfig, out: TextIO) -> int:
    L = search_order10_counterexample(config.limits)
    return _write(L, config.args["output"], ["order 10: weak but not strong Lagrange"], config, out)


COMMANDS = {
    "validate": cmd_validate,
    "props": cmd_props,
    "subloops": cmd_subloops,
    "lagrange": cmd_lagrange,
    "quotient": cmd_quotient,
    "paige": cmd_paige,
    "group": cmd_group,
    "census": cmd_census,
    "search-order10": cmd_search_order10,
}


def run(config: RunConfig, out: Optional[TextIO] = None) -> int:
    """
    Execute one command and return its exit status.

    LoopErrors are reported on stderr as "error: <reason>: <message>" and mapped
    to their exit code.
    """
    out = out or sys.stdout
    try:
        return COMMANDS[config.command](config, out)
    except LoopError as exc:
        logger.error(f"error: {exc.reason}: {exc}")
        return exit_code_for(exc)
    except ValueError as exc:
        logger.error(f"error: invalid_input: {exc}")
        return 2
    except OSError as exc:
        logger.error(f"error: io_error: {exc}")
        return 2


# =============================================================================
# ARGUMENT PARSING
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help="Worker threads (default: 1)")
    common.add_argument("--max-subloops", type=int, default=None, help="Subloop count cap")
    common.add_argument("--max-queue", type=int, default=None, help="Pending work cap per round")
    common.add_argument("--format", choices=FORMATS, default=TEXT, help="Report format")
    common.add_argument("--checkpoint", default=None, help="Subloop enumeration checkpoint (JSON)")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    common.add_argument("-q", "--quiet", action="store_true", help="Warnings only")

    parser = argparse.ArgumentParser(prog="loopworks", description="Finite loop toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="Check the loop axioms")
    p.add_argument("file")

    p = sub.add_parser("props", parents=[common], help="Full property report")
    p.add_argument("file")
    p.add_argument("--skip-lagrange", action="store_true", help="Do not enumerate subloops")

    p = sub.add_parser("subloops", parents=[common], help="Enumerate subloops")
    p.add_argument("file")
    p.add_argument("--lattice", action="store_true", help="Include the containment relation")

    p = sub.add_parser("lagrange", parents=[common], help="Decide a Lagrange property")
    p.add_argument("file")
    p.add_argument("--strong", action="store_true")
    p.add_argument("--certificate", default=None, help="Write the certificate here")

    p = sub.add_parser("quotient", parents=[common], help="Quotient by a normal subloop")
    p.add_argument("file")
    p.add_argument("--normal", required=True, help='Elements of N, e.g. "0,3"')
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("paige", parents=[common], help="Build the Paige loop M*(q)")
    p.add_argument("q", type=int)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("group", parents=[common], help="Build a group or Chein double")
    p.add_argument("kind", choices=["cyclic", "product", "chein", "symmetric",
                                    "alternating", "dihedral", "quaternion"])
    p.add_argument("params", nargs="*")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("census", parents=[common], help="All loops of order n up to isomorphism")
    p.add_argument("n", type=int)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("search-order10", parents=[common], help="Weak-but-not-strong Lagrange loop")
    p.add_argument("-o", "--output", required=True)
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="%(message)s", stream=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    configure_logging(ns.verbose, ns.quiet)
    try:
        config = RunConfig.from_namespace(ns)
    except LoopError as exc:
        logger.error(f"error: {exc.reason}: {exc}")
        return exit_code_for(exc)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
