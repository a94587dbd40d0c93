"""Convert computed invariants into report schema models."""

import hashlib
import json
from collections.abc import Iterable, Sequence

import numpy as np

from graphinv import __version__
from graphinv.schemas.reports import (
    CirclePairInfo,
    ComplexEntry,
    DiagramIsoInfo,
    ExtReport,
    FDReport,
    GraphInfo,
    GroupInfo,
    KDataReport,
    LatticeElementInfo,
    LatticeReport,
    PsiPair,
    PsiReportInfo,
    Report,
    SubquotientInfo,
    TailReport,
    VerdictReport,
)
from graphinv.services.abelian import FGAbelianGroup
from graphinv.services.diagrams import ExtGroups, hom_family
from graphinv.services.fd_correspondence import CKReport, CorrespondenceFamily
from graphinv.services.graph_core import Graph
from graphinv.services.graph_io import graph_digest
from graphinv.services.ideal_lattice import IdealLattice, MaximalTail, join_irreducibles
from graphinv.services.invariant_compare import DiagramIsoSearch, PsiReport, TailCrosscheck, Verdict
from graphinv.services.ktheory import KData


def _ints(values: Iterable[int]) -> list[str]:
    return [str(x) for x in values]


def group_info(group: FGAbelianGroup) -> GroupInfo:
    return GroupInfo(
        description=group.describe(),
        free_rank=str(group.free_rank),
        torsion=_ints(group.torsion),
    )


def graph_info(graph: Graph) -> GraphInfo:
    return GraphInfo(
        vertices=list(graph.vertices),
        edges=[[e, graph.src[e], graph.rng[e]] for e in graph.edges],
        digest=graph_digest(graph),
    )


def lattice_report(lattice: IdealLattice) -> LatticeReport:
    irreducible = set(join_irreducibles(lattice))
    primes = set(lattice.primes)
    return LatticeReport(
        size=str(len(lattice)),
        elements=[
            LatticeElementInfo(
                members=sorted(h.members),
                height=str(lattice.height(h)),
                prime=h in primes,
                join_irreducible=h in irreducible,
            )
            for h in lattice
        ],
        covers=[[a.format(), b.format()] for a, b in lattice.covers],
        join_irreducibles=[h.format() for h in lattice if h in irreducible],
    )


def kdata_report(data: KData) -> KDataReport:
    return KDataReport(
        w=list(data.vertices),
        regular=list(data.regular),
        k0=group_info(data.k0),
        k1=group_info(data.k1),
        k1_basis=[_ints(b) for b in data.k1_basis],
        generator_classes={v: _ints(data.generator_class(v)) for v in data.vertices},
    )


def tail_report(tail: MaximalTail, crosscheck: TailCrosscheck | None = None) -> TailReport:
    subquotient = None
    if crosscheck is not None:
        sub = crosscheck.subquotient
        subquotient = SubquotientInfo(
            lower=sorted(sub.lower.members),
            upper=sorted(sub.upper.members),
            k0=group_info(sub.k0),
            k1_rank=str(sub.k1_rank),
            pattern=crosscheck.pattern,
            cone_is_group=crosscheck.cone_is_group.value,
        )
    return TailReport(
        members=sorted(tail.members),
        kind=tail.kind.value,
        complement=sorted(tail.complement.members),
        successor=sorted(tail.successor.members),
        cycle=list(tail.tau_cycle.edges) if tail.tau_cycle else None,
        subquotient=subquotient,
    )


def _unit(j: int, n: int) -> tuple[int, ...]:
    return tuple(int(i == j) for i in range(n))


def _families(hom_group, group: FGAbelianGroup, embed) -> list[dict[str, list[str]]]:
    out = []
    for j in range(group.rank):
        element = embed.apply(group.lift(_unit(j, group.rank)))
        out.append({k: _ints(v) for k, v in hom_family(hom_group, element).items()})
    return out


def ext_report(ext: ExtGroups, coefficients: str) -> ExtReport:
    complex_ = ext.complex
    c2 = complex_.c2.group
    ext2_generators = []
    for j in range(ext.ext2.rank):
        element = ext.ext2.lift(_unit(j, ext.ext2.rank))
        ext2_generators.append(
            {k: _ints(v) for k, v in hom_family(complex_.c2, element).items()}
        )
    return ExtReport(
        index=complex_.index,
        coefficients=coefficients,
        ext0=group_info(ext.ext0),
        ext1=group_info(ext.ext1),
        ext2=group_info(ext.ext2),
        ext1_cocycles=_families(complex_.c1, ext.ext1, ext.ext1_embed),
        ext2_generators=ext2_generators if c2.generators else [],
    )


def _iso_infos(search: DiagramIsoSearch | None) -> list[DiagramIsoInfo]:
    if search is None:
        return []
    return [
        DiagramIsoInfo(
            degree=iso.degree,
            status=iso.status.value,
            origin=iso.origin,
            order_units=iso.order_units.value,
            components={
                w.format(): [_ints(r) for r in c.coordinate_matrix()]
                for w, c in iso.morphism.components.items()
            },
        )
        for iso in search.isomorphisms
    ]


def psi_report_info(report: PsiReport) -> PsiReportInfo:
    return PsiReportInfo(
        psi=[
            PsiPair(source=a.format(), target=b.format())
            for a, b in sorted(report.psi.items(), key=lambda kv: kv[0].sort_key)
        ],
        conclusion=report.conclusion.value,
        nodes_match=report.nodes_match,
        tau_matched=report.tau_matched,
        offending_tail=report.offending_tail.format() if report.offending_tail else None,
        phi1=_iso_infos(report.phi1),
        phi1_exhaustive=report.phi1.exhaustive if report.phi1 else None,
        phi0=_iso_infos(report.phi0),
        phi0_exhaustive=report.phi0.exhaustive if report.phi0 else None,
        ext2=group_info(report.ext2) if report.ext2 is not None else None,
        obstruction_vanishes=report.obstruction.is_zero if report.obstruction else None,
        circle_pairs=[
            CirclePairInfo(
                tail=mine.tail.format(),
                image=theirs.tail.format(),
                tail_k0=group_info(mine.subquotient.k0),
                image_k0=group_info(theirs.subquotient.k0),
            )
            for mine, theirs in report.circle_pairs
        ],
        notes=list(report.notes),
    )


def verdict_report(verdict: Verdict) -> VerdictReport:
    return VerdictReport(
        conclusion=verdict.conclusion.value,
        pi_proxy=list(verdict.pi_proxy),
        lattice_isomorphisms=str(len(verdict.reports)),
        psi=[psi_report_info(r) for r in verdict.reports],
        notes=list(verdict.notes),
    )


def _decimal(x: float) -> str:
    return np.format_float_positional(x, unique=True, trim="-")


def _complex_rows(matrix: np.ndarray) -> list[list[ComplexEntry]]:
    return [[(_decimal(z.real), _decimal(z.imag)) for z in row] for row in np.asarray(matrix, dtype=complex)]


def fd_report(family: CorrespondenceFamily, ck: CKReport, verified: bool) -> FDReport:
    return FDReport(
        blocks=_ints(family.target.block_sizes),
        method=family.method,
        seed=str(family.seed) if family.seed is not None else None,
        dims={v: _ints(d) for v, d in family.dims.items()},
        unitary_shapes={v: _ints(u.shape[0] for u in blocks) for v, blocks in family.unitaries.items()},
        unitaries={v: [_complex_rows(u) for u in blocks] for v, blocks in family.unitaries.items()},
        monoid_hom_verified=verified,
        residual=ck.residual,
        edge_residuals=dict(ck.edges),
        vertex_residuals=dict(ck.vertices),
    )


def input_digest(parts: Sequence[str]) -> str:
    """sha256 over the canonical inputs of a command."""
    h = hashlib.sha256()
    for part in parts:
        h.update(part.encode("utf-8"))
        h.update(b"\0")
    return h.hexdigest()


def new_report(command: str, inputs: Sequence[str], **sections) -> Report:
    return Report(
        tool_version=__version__,
        command=command,
        input_digest=input_digest([command, *inputs]),
        **sections,
    )


def render(report: Report) -> str:
    """Deterministic JSON: schema field order, absent sections dropped."""
    return json.dumps(report.model_dump(mode="json", exclude_none=True), indent=2) + "\n"
