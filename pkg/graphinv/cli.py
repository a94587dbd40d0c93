"""Command-line interface: JSON reports on stdout, logs on stderr.

Exit statuses: 0 success, 1 bad input, 2 size or search cap exceeded,
3 internal invariant violated.
"""

import argparse
import json
import logging
import sys
import uuid
from collections.abc import Sequence
from pathlib import Path

from graphinv import __version__
from graphinv.catalog import get_graph, list_graphs
from graphinv.config import get_settings
from graphinv.errors import ErrorCode, GraphInvError, ParseError, make_error
from graphinv.logging_config import run_id, setup_logging
from graphinv.schemas.errors import ErrorResponse
from graphinv.schemas.reports import MonoidReport, Report
from graphinv.services.corpus import CorpusBounds, corpus_scan
from graphinv.services.diagrams import build_k_diagram, ext_groups, index_elements, pullback_diagram
from graphinv.services.fd_correspondence import (
    FDTarget,
    dimension_hom,
    lift_monoid_hom_fd,
    verify_ck,
)
from graphinv.services.graph_core import Graph
from graphinv.services.graph_io import load_graph_file, serialize_graph
from graphinv.services.graph_monoid import (
    MonoidElement,
    congruence_oracle,
    equal_in_P,
    leq_in_P,
    supp_ideal,
)
from graphinv.services.ideal_lattice import (
    HSSet,
    enumerate_lattice,
    extend_order_iso,
    maximal_tails,
)
from graphinv.services.invariant_compare import (
    compare_verdict,
    find_lattice_isos,
    ktheory_tail_crosscheck,
)
from graphinv.services.ktheory import as_hsset, k_groups
from graphinv.services.reporting import (
    ext_report,
    fd_report,
    graph_info,
    kdata_report,
    lattice_report,
    new_report,
    render,
    tail_report,
    verdict_report,
)

logger = logging.getLogger(__name__)

CATALOG_PREFIX = "catalog:"


def load_graph(source: str) -> Graph:
    """A graph file path, or ``catalog:<id>`` for a shipped example."""
    if source.startswith(CATALOG_PREFIX):
        graph_id = source[len(CATALOG_PREFIX) :]
        graph = get_graph(graph_id)
        if graph is None:
            raise ParseError(f"No catalog graph named '{graph_id}'", graph=graph_id)
        return graph
    return load_graph_file(Path(source))


def _members(text: str) -> frozenset[str]:
    return frozenset(v.strip() for v in text.split(",") if v.strip())


def parse_psi(text: str, graph: Graph, other: Graph) -> dict[HSSet, HSSet]:
    """``W=W';...`` with comma-separated members; an empty side is the empty set."""
    psi = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        if "=" not in part:
            raise ParseError(f"Malformed lattice map entry '{part.strip()}'", entry=part.strip())
        left, right = part.split("=", 1)
        psi[as_hsset(graph, _members(left))] = as_hsset(other, _members(right))
    return extend_order_iso(enumerate_lattice(graph), enumerate_lattice(other), psi)


def parse_dims(text: str) -> dict[str, tuple[int, ...]]:
    """``v:3;w:1,2`` rank vectors per vertex."""
    dims = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        try:
            v, values = part.split(":", 1)
            dims[v.strip()] = tuple(int(x) for x in values.split(","))
        except ValueError as exc:
            raise ParseError(f"Malformed dimension entry '{part.strip()}'", entry=part.strip()) from exc
    return dims


def parse_eta(path: str, graph: Graph) -> dict[HSSet, list[list[int]]]:
    """JSON object from comma-separated lattice members to component matrices."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ParseError(f"Cannot read obstruction file: {exc}", source=path) from exc
    return {as_hsset(graph, _members(k)): [[int(x) for x in row] for row in v] for k, v in raw.items()}


# --- command handlers -----------------------------------------------------


def cmd_ideals(args) -> Report:
    graph = load_graph(args.file)
    lattice = enumerate_lattice(graph, args.max_vertices)
    return new_report(
        "ideals",
        [serialize_graph(graph)],
        graph=graph_info(graph),
        lattice=lattice_report(lattice),
    )


def cmd_ktheory(args) -> Report:
    graph = load_graph(args.file)
    if args.set is not None:
        elements = [as_hsset(graph, _members(args.set))]
    else:
        elements = list(enumerate_lattice(graph, args.max_vertices))
    return new_report(
        "ktheory",
        [serialize_graph(graph), args.set or ""],
        graph=graph_info(graph),
        kdata=[kdata_report(k_groups(graph, w)) for w in elements],
    )


def cmd_monoid(args) -> Report:
    graph = load_graph(args.file)
    c1 = MonoidElement.parse(args.c1)
    c2 = MonoidElement.parse(args.c2)
    graph.require(c1.support | c2.support)
    support = [sorted(supp_ideal(graph, c).members) for c in (c1, c2)]
    witness = reason = oracle = depth = None

    if args.query == "eq":
        answer = "equal" if equal_in_P(graph, c1, c2) else "distinct"
        oracle_answer = congruence_oracle(graph, c1, c2, depth=args.depth)
        oracle, depth = oracle_answer.result.value, str(oracle_answer.depth)
    elif args.query == "leq":
        cone = leq_in_P(graph, c1, c2)
        answer = cone.status.value
        witness = {v: str(n) for v, n in (cone.witness or {}).items()} if cone.witness is not None else None
        reason = cone.reason
    else:
        oracle_answer = congruence_oracle(graph, c1, c2, depth=args.depth)
        answer = oracle_answer.result.value
        depth = str(oracle_answer.depth)

    return new_report(
        "monoid",
        [serialize_graph(graph), args.query, c1.format(), c2.format()],
        graph=graph_info(graph),
        monoid=MonoidReport(
            query=args.query,
            c1=c1.format(),
            c2=c2.format(),
            answer=answer,
            support=support,
            witness=witness,
            reason=reason,
            oracle=oracle,
            oracle_depth=depth,
        ),
    )


def cmd_tails(args) -> Report:
    graph = load_graph(args.file)
    tails = maximal_tails(graph, args.max_vertices)
    return new_report(
        "tails",
        [serialize_graph(graph)],
        graph=graph_info(graph),
        tails=[tail_report(t, ktheory_tail_crosscheck(graph, t)) for t in tails],
    )


def cmd_ext(args) -> Report:
    graph = load_graph(args.file)
    inputs = [serialize_graph(graph), args.index]
    if args.target is None:
        target = build_k_diagram(graph, 1, args.index)
        coefficients = "K1 of the graph"
        other = None
    else:
        other = load_graph(args.target)
        inputs.append(serialize_graph(other))
        if args.psi is not None:
            psi = parse_psi(args.psi, graph, other)
            inputs.append(args.psi)
        else:
            isos = find_lattice_isos(
                enumerate_lattice(graph, args.max_vertices),
                enumerate_lattice(other, args.max_vertices),
            )
            if not isos:
                raise ParseError("Lattices are not order isomorphic; pass --psi explicitly")
            psi = isos[0]
        index = index_elements(graph, args.index, args.max_vertices)
        target = pullback_diagram({w: psi[w] for w in index}, build_k_diagram(other, 1))
        coefficients = "pulled-back K1 of the target"
    ext = ext_groups(graph, target, args.index)
    return new_report(
        "ext",
        inputs,
        graph=graph_info(graph),
        other=graph_info(other) if other is not None else None,
        ext=ext_report(ext, coefficients),
    )


def cmd_compare(args) -> Report:
    graph = load_graph(args.file1)
    other = load_graph(args.file2)
    eta = parse_eta(args.eta, graph) if args.eta else None
    verdict = compare_verdict(graph, other, eta=eta, bound=args.max_vertices, threads=args.threads)
    inputs = [serialize_graph(graph), serialize_graph(other)]
    if args.eta:
        inputs.append(Path(args.eta).read_text(encoding="utf-8"))
    return new_report(
        "compare",
        inputs,
        graph=graph_info(graph),
        other=graph_info(other),
        verdict=verdict_report(verdict),
    )


def cmd_fd(args) -> Report:
    graph = load_graph(args.file)
    try:
        blocks = tuple(int(x) for x in args.blocks.split(","))
    except ValueError as exc:
        raise ParseError(f"Malformed block sizes '{args.blocks}'") from exc
    target = FDTarget(blocks)
    dims = parse_dims(args.dims)
    method = "haar" if args.haar else "permutation"
    family = lift_monoid_hom_fd(graph, target, dims, method=method, seed=args.seed)
    verified = dimension_hom(graph, target, family.dims).verified
    return new_report(
        "fd",
        [serialize_graph(graph), args.blocks, args.dims, method, str(family.seed)],
        graph=graph_info(graph),
        fd=fd_report(family, verify_ck(family, graph), verified),
    )


def cmd_corpus(args) -> Report:
    bounds = CorpusBounds(max_vertices=args.max_vertices, max_edges=args.max_edges)
    report = corpus_scan(args.seed, args.count, bounds, threads=args.threads)
    return new_report(
        "corpus",
        [str(args.seed), str(args.count), str(args.max_vertices), str(args.max_edges)],
        corpus=report,
    )


def cmd_catalog(args) -> Report:
    if args.id is None:
        return new_report("catalog", [], catalog=list_graphs())
    graph = load_graph(CATALOG_PREFIX + args.id)
    return new_report("catalog", [args.id], graph=graph_info(graph))


# --- parser ---------------------------------------------------------------


class ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as ParseError (exit status 1)."""

    def error(self, message: str):
        raise ParseError(f"Invalid arguments: {message}", usage=self.format_usage().strip())


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = ArgumentParser(
        prog="graphinv",
        description="Classification invariants of graph C*-algebras.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=settings.log_level)
    parser.add_argument("--threads", type=int, default=settings.threads)
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_command(name: str, handler, help_text: str, *files: str):
        p = sub.add_parser(name, help=help_text)
        for f in files:
            p.add_argument(f, help="graph file or catalog:<id>")
        p.add_argument("--max-vertices", type=int, default=None, help="lattice enumeration bound")
        p.set_defaults(handler=handler)
        return p

    graph_command("ideals", cmd_ideals, "hereditary saturated lattice", "file")
    p = graph_command("ktheory", cmd_ktheory, "K-groups of the ideals", "file")
    p.add_argument("--set", default=None, help="comma-separated hereditary saturated set")

    p = sub.add_parser("monoid", help="projection monoid queries")
    p.add_argument("query", choices=["eq", "leq", "oracle"])
    p.add_argument("file")
    p.add_argument("c1", help="literal such as v1:2,v3:1")
    p.add_argument("c2")
    p.add_argument("--depth", type=int, default=10)
    p.set_defaults(handler=cmd_monoid)

    graph_command("tails", cmd_tails, "maximal tails with K-theory cross-check", "file")

    p = graph_command("ext", cmd_ext, "Ext groups of the K0 diagram", "file")
    p.add_argument("--target", default=None, help="second graph for the coefficient diagram")
    p.add_argument("--psi", default=None, help="lattice map W=W';... (default: first found)")
    p.add_argument("--index", choices=["p", "s"], default="p")

    p = graph_command("compare", cmd_compare, "classification verdict", "file1", "file2")
    p.add_argument("--eta", default=None, help="JSON file with an obstruction morphism")

    p = graph_command("fd", cmd_fd, "finite-dimensional correspondence", "file")
    p.add_argument("--blocks", required=True, help="block sizes such as 2,1")
    p.add_argument("--dims", required=True, help="rank vectors such as v:3;w:1,2")
    p.add_argument("--haar", action="store_true", help="seeded Haar unitaries")
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("corpus", help="bucket random graphs by invariant digest")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-vertices", type=int, default=5)
    p.add_argument("--max-edges", type=int, default=8)
    p.set_defaults(handler=cmd_corpus)

    p = sub.add_parser("catalog", help="list or show shipped example graphs")
    p.add_argument("id", nargs="?", default=None)
    p.set_defaults(handler=cmd_catalog)
    return parser


def render_error(payload: dict) -> str:
    report = ErrorResponse.model_validate(payload)
    return report.model_dump_json(indent=2, exclude_none=True) + "\n"


def main(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    settings = get_settings()
    try:
        args = parser.parse_args(argv)
    except ParseError as exc:
        setup_logging(settings.log_level, settings.log_json)
        logger.warning("usage_rejected", extra={"detail": exc.detail})
        stdout.write(render_error(exc.to_dict()))
        return exc.exit_status
    setup_logging(args.log_level, settings.log_json)
    token = run_id.set(uuid.uuid4().hex[:12])
    try:
        report = args.handler(args)
        stdout.write(render(report))
        logger.info("command_completed", extra={"command": args.command})
        return 0
    except GraphInvError as exc:
        logger.warning(
            "command_failed",
            extra={"command": args.command, "code": exc.code.value, "detail": exc.detail},
        )
        stdout.write(render_error(exc.to_dict()))
        return exc.exit_status
    except Exception:
        logger.exception("command_crashed", extra={"command": args.command})
        stdout.write(render_error(make_error(ErrorCode.INTERNAL_ERROR)))
        return 3
    finally:
        run_id.reset(token)


cli_dispatch = main


if __name__ == "__main__":
    sys.exit(main())
