"""Invariant bundles and classification verdicts for pairs of graphs.

A verdict searches for an order isomorphism psi of the ideal lattices, then
for each psi checks that tail kinds correspond and looks for isomorphisms of
the K1 and ordered K0 diagrams over psi. Ext^2 of the K0 diagram with
coefficients in the pulled-back K1 diagram decides whether every pair of
diagram isomorphisms lifts; when it does not vanish the conclusion stays
conditional.
"""

import hashlib
import itertools
import json
import logging
from collections.abc import Iterator, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

from networkx.algorithms.isomorphism import MultiDiGraphMatcher

from graphinv.config import get_settings
from graphinv.errors import CapExceeded, InconsistentClassifiers, check
from graphinv.metrics import record_verdict, timed
from graphinv.services.abelian import FGAbelianGroup, GroupHom
from graphinv.services.diagrams import (
    DiagramMorphism,
    ExtGroups,
    GroupDiagram,
    ZeroTest,
    build_k_diagram,
    ext_groups,
    hom_diagram,
    k0_morphisms,
    pullback_diagram,
    represents_zero_ext2,
)
from graphinv.services.graph_core import Graph
from graphinv.services.ideal_lattice import (
    HSSet,
    IdealLattice,
    MaximalTail,
    TailKind,
    enumerate_lattice,
    extend_order_iso,
    generator,
    maximal_tails,
    tau_successor,
)
from graphinv.services.intlinalg import IntMatrix
from graphinv.services.ktheory import (
    Answer,
    ConeSearch,
    KData,
    SubquotientK,
    is_order_unit,
    k_groups,
    positive_cone_member,
    subquotient_k,
)

logger = logging.getLogger(__name__)

PI_PROXY_DEFINITION = "every maximal tail is of purely infinite simple kind"

HOMOTOPY_NOTE = (
    "stable homotopy equivalence preserving the gauge-invariant ideals; "
    "circle tails are matched with their gauge-simple subquotients"
)


class Conclusion(str, Enum):
    """Verdict classes, weakest first."""

    INVARIANTS_DIFFER = "invariants_differ"
    UNDECIDED = "undecided"
    INVARIANTS_ISOMORPHIC_OBSTRUCTION_UNRESOLVED = "invariants_isomorphic_obstruction_unresolved"
    HOMOTOPY_EQUIVALENT_IF_OBSTRUCTION_VANISHES = "homotopy_equivalent_if_obstruction_vanishes"
    STABLY_ISOMORPHIC_IF_OBSTRUCTION_VANISHES = "stably_isomorphic_if_obstruction_vanishes"
    HOMOTOPY_EQUIVALENT = "homotopy_equivalent"
    STABLY_ISOMORPHIC = "stably_isomorphic"

    @property
    def strength(self) -> int:
        return list(Conclusion).index(self)


class IsoStatus(str, Enum):
    CONFIRMED = "confirmed"
    UNCONFIRMED = "unconfirmed"


@dataclass(frozen=True, eq=False)
class InvariantBundle:
    graph: Graph
    lattice: IdealLattice
    kdata: dict[HSSet, KData]
    tails: tuple[MaximalTail, ...]
    ext_self: ExtGroups

    @property
    def pi_proxy(self) -> bool:
        return all(t.kind is TailKind.PURELY_INFINITE_SIMPLE for t in self.tails)

    @cached_property
    def digest(self) -> str:
        """Relabeling-invariant fingerprint of the computed invariants."""
        ups = {h: 0 for h in self.lattice}
        downs = {h: 0 for h in self.lattice}
        for a, b in self.lattice.covers:
            ups[a] += 1
            downs[b] += 1
        nodes = sorted(
            [
                self.lattice.height(h),
                downs[h],
                ups[h],
                list(self.kdata[h].k0.invariants()[1]),
                self.kdata[h].k0.free_rank,
                self.kdata[h].k1.free_rank,
            ]
            for h in self.lattice
        )
        payload = {
            "nodes": nodes,
            "tails": sorted(t.kind.value for t in self.tails),
            "ext": list(self.ext_self.describe()),
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def invariant_bundle(graph: Graph, bound: int | None = None) -> InvariantBundle:
    """All invariants of one graph.

    Raises:
        TooLarge: if the lattice enumeration bound is exceeded
    """
    with timed("invariant_bundle"):
        lattice = enumerate_lattice(graph, bound)
        kdata = {h: k_groups(graph, h) for h in lattice}
        tails = tuple(maximal_tails(graph, bound))
        ext_self = ext_groups(graph, build_k_diagram(graph, 1))
    return InvariantBundle(graph, lattice, kdata, tails, ext_self)


# --- lattice isomorphisms -------------------------------------------------


def _signatures(lattice: IdealLattice) -> dict[HSSet, tuple[int, ...]]:
    ups = {h: 0 for h in lattice}
    downs = {h: 0 for h in lattice}
    for a, b in lattice.covers:
        ups[a] += 1
        downs[b] += 1
    return {
        h: (
            lattice.height(h),
            downs[h],
            ups[h],
            sum(1 for x in lattice if x <= h),
            sum(1 for x in lattice if h <= x),
        )
        for h in lattice
    }


def find_lattice_isos(
    lattice: IdealLattice,
    other: IdealLattice,
    cap: int | None = None,
) -> list[dict[HSSet, HSSet]]:
    """All order isomorphisms between two lattices, by backtracking.

    Candidates for each element share its height and cover counts; an
    assignment must preserve and reflect the order against every earlier one.

    Raises:
        CapExceeded: if more than ``cap`` isomorphisms exist
    """
    cap = get_settings().lattice_iso_cap if cap is None else cap
    if len(lattice) != len(other):
        return []
    mine = _signatures(lattice)
    theirs = _signatures(other)
    if sorted(mine.values()) != sorted(theirs.values()):
        return []

    order = sorted(lattice, key=lambda h: (mine[h], h.sort_key))
    candidates = {h: [x for x in other if theirs[x] == mine[h]] for h in order}
    found: list[dict[HSSet, HSSet]] = []
    assignment: dict[HSSet, HSSet] = {}
    used: set[HSSet] = set()

    def extend(depth: int) -> None:
        if depth == len(order):
            if len(found) >= cap:
                raise CapExceeded("Too many lattice isomorphisms", cap=cap)
            found.append(dict(assignment))
            return
        h = order[depth]
        for x in candidates[h]:
            if x in used:
                continue
            if all(
                (a <= h) == (y <= x) and (h <= a) == (x <= y) for a, y in assignment.items()
            ):
                assignment[h] = x
                used.add(x)
                extend(depth + 1)
                del assignment[h]
                used.discard(x)

    extend(0)
    index = other.index
    found.sort(key=lambda psi: tuple(index[psi[h]] for h in lattice))
    logger.debug("lattice_isos_found", extra={"count": len(found), "size": len(lattice)})
    return found


# --- diagram isomorphisms -------------------------------------------------


@dataclass(frozen=True, eq=False)
class DiagramIso:
    degree: int
    morphism: DiagramMorphism
    status: IsoStatus
    origin: str
    order_units: Answer = Answer.YES


@dataclass(frozen=True, eq=False)
class DiagramIsoSearch:
    """Isomorphisms found; ``exhaustive`` means none exist beyond these."""

    degree: int
    isomorphisms: tuple[DiagramIso, ...]
    exhaustive: bool
    tried: int = 0

    @property
    def confirmed(self) -> tuple[DiagramIso, ...]:
        return tuple(i for i in self.isomorphisms if i.status is IsoStatus.CONFIRMED)

    def __len__(self) -> int:
        return len(self.isomorphisms)


def _nodes_match(source: GroupDiagram, target: GroupDiagram) -> bool:
    return all(source.nodes[w].is_isomorphic(target.nodes[w]) for w in source.index)


def _morphism_key(morphism: DiagramMorphism) -> tuple:
    return tuple(
        tuple(tuple(r) for r in morphism.components[w].coordinate_matrix())
        for w in morphism.source.index
    )


def _free_box(rank: int) -> Iterator[tuple[int, ...]]:
    """Vectors in {-1, 0, 1}^rank by increasing number of nonzero entries."""
    for k in range(rank + 1):
        for positions in itertools.combinations(range(rank), k):
            for signs in itertools.product((1, -1), repeat=k):
                v = [0] * rank
                for p, s in zip(positions, signs):
                    v[p] = s
                yield tuple(v)


def _coordinates(group: FGAbelianGroup) -> Iterator[tuple[int, ...]]:
    """Canonical coordinates: all torsion values, free part within the unit box."""
    for free in _free_box(group.free_rank):
        for torsion in itertools.product(*(range(d) for d in group.torsion)):
            yield tuple(torsion) + free


def _inducing_isomorphisms(
    graph: Graph,
    other: Graph,
    psi: Mapping[HSSet, HSSet],
    limit: int = 8,
) -> Iterator[dict[str, str]]:
    """Vertex bijections of graph isomorphisms whose lattice action is psi."""
    if len(graph.vertices) != len(other.vertices) or len(graph.edges) != len(other.edges):
        return
    cap = get_settings().diagram_iso_cap
    candidates: Iterator[dict[str, str]] = MultiDiGraphMatcher(
        graph.nx_graph, other.nx_graph
    ).isomorphisms_iter()
    if graph == other:
        candidates = itertools.chain([{v: v for v in graph.vertices}], candidates)
    seen = set()
    emitted = 0
    for sigma in itertools.islice(candidates, cap):
        key = tuple(sorted(sigma.items()))
        if key in seen:
            continue
        seen.add(key)
        if all(HSSet(frozenset(sigma[v] for v in w)) == image for w, image in psi.items()):
            yield sigma
            emitted += 1
            if emitted >= limit:
                return


def _seed_morphism(
    graph: Graph,
    other: Graph,
    psi: Mapping[HSSet, HSSet],
    sigma: Mapping[str, str],
    degree: int,
    source: GroupDiagram,
    target: GroupDiagram,
) -> DiagramMorphism:
    components = {}
    for w in source.index:
        data = k_groups(graph, w)
        data2 = k_groups(other, psi[w])
        if degree == 0:
            columns = [data2.vector({sigma[v]: 1}) for v in data.vertices]
            rows = len(data2.vertices)
        else:
            columns = []
            for b in data.k1_basis:
                moved = {sigma[u]: c for u, c in zip(data.regular, b)}
                columns.append(data2.k1_coordinates(data2.regular_vector(moved)))
            rows = len(data2.k1_basis)
        components[w] = GroupHom(
            source.nodes[w], target.nodes[w], IntMatrix.from_columns(columns, rows)
        )
    morphism = DiagramMorphism(source, target, components)
    check(morphism.is_natural(), "graph isomorphism induces a non-natural map", degree=degree)
    return morphism


def _positivity(
    graph: Graph,
    other: Graph,
    psi: Mapping[HSSet, HSSet],
    morphism: DiagramMorphism,
) -> tuple[IsoStatus | None, Answer]:
    """Cone preservation both ways, checked at the singly generated elements."""
    answers = []
    for v in graph.vertices:
        w = generator(graph, v)
        image = morphism.components[w](k_groups(graph, w).vector({v: 1}))
        data2 = k_groups(other, psi[w])
        answers.append(
            positive_cone_member(other, data2.w, dict(zip(data2.vertices, image))).status
        )
        if answers[-1] is Answer.NO:
            return None, Answer.NO

    inverse = {b: a for a, b in psi.items()}
    for u in other.vertices:
        w2 = generator(other, u)
        w = inverse[w2]
        back = morphism.components[w].inverse()(k_groups(other, w2).vector({u: 1}))
        data = k_groups(graph, w)
        answers.append(positive_cone_member(graph, w, dict(zip(data.vertices, back))).status)
        if answers[-1] is Answer.NO:
            return None, Answer.NO

    if any(a is Answer.UNKNOWN for a in answers):
        return IsoStatus.UNCONFIRMED, Answer.UNKNOWN

    units = Answer.YES
    for w in morphism.source.index:
        if not w.members:
            continue
        data = k_groups(graph, w)
        total = morphism.components[w](data.vector({v: 1 for v in data.vertices}))
        data2 = k_groups(other, psi[w])
        cone = positive_cone_member(other, data2.w, dict(zip(data2.vertices, total)))
        if not (cone.is_member and is_order_unit(other, data2.w, cone.witness or {})):
            units = Answer.UNKNOWN
    return IsoStatus.CONFIRMED, units


def find_diagram_isos(
    graph: Graph,
    other: Graph,
    psi: Mapping[HSSet, HSSet],
    degree: int,
    *,
    limit: int | None = None,
    cap: int | None = None,
) -> DiagramIsoSearch:
    """Isomorphisms of the degree-0 or degree-1 K diagrams over psi.

    Candidates come from graph isomorphisms inducing psi, then from the Hom
    group of natural transformations with every torsion coordinate and free
    coordinates in {-1, 0, 1}. An isomorphism is a natural transformation
    bijective on every node. In degree 0 it must also map the positive cone
    onto the positive cone; an unknown cone answer marks it unconfirmed.

    Raises:
        CapExceeded: if more than ``cap`` candidates are needed
    """
    check(degree in (0, 1), "degree must be 0 or 1", degree=degree)
    cap = get_settings().diagram_iso_cap if cap is None else cap
    source = build_k_diagram(graph, degree)
    target = pullback_diagram(psi, build_k_diagram(other, degree))
    if not _nodes_match(source, target):
        return DiagramIsoSearch(degree, (), exhaustive=True)

    if degree == 1:
        homs = hom_diagram(source, target)
        group = homs.group

        def build(coords: Sequence[int]) -> DiagramMorphism:
            return homs.to_morphism(group.lift(coords))

    else:
        morphisms = k0_morphisms(graph, target)
        group = morphisms.group

        def build(coords: Sequence[int]) -> DiagramMorphism:
            return morphisms.morphism(morphisms.family(group.lift(coords)))

    found: list[DiagramIso] = []
    seen: set[tuple] = set()

    def consider(morphism: DiagramMorphism, origin: str) -> bool:
        key = _morphism_key(morphism)
        if key in seen:
            return False
        seen.add(key)
        if not all(c.is_isomorphism() for c in morphism.components.values()):
            return False
        status, units = IsoStatus.CONFIRMED, Answer.YES
        if degree == 0:
            status, units = _positivity(graph, other, psi, morphism)
            if status is None:
                return False
        found.append(DiagramIso(degree, morphism, status, origin, units))
        confirmed = sum(i.status is IsoStatus.CONFIRMED for i in found)
        return limit is not None and confirmed >= limit

    for sigma in _inducing_isomorphisms(graph, other, psi):
        seed = _seed_morphism(graph, other, psi, sigma, degree, source, target)
        if consider(seed, "graph_isomorphism"):
            return DiagramIsoSearch(degree, tuple(found), exhaustive=False)

    tried = 0
    for coords in _coordinates(group):
        tried += 1
        if tried > cap:
            raise CapExceeded(
                "Too many diagram isomorphism candidates",
                cap=cap,
                degree=degree,
            )
        if consider(build(coords), "search"):
            return DiagramIsoSearch(degree, tuple(found), exhaustive=False, tried=tried)

    return DiagramIsoSearch(degree, tuple(found), exhaustive=group.free_rank == 0, tried=tried)


# --- tails ----------------------------------------------------------------


def tau_mismatch(
    graph: Graph,
    other: Graph,
    psi: Mapping[HSSet, HSSet],
) -> MaximalTail | None:
    """The first tail whose psi-image is not a tail of the same kind, if any."""
    psi = extend_order_iso(enumerate_lattice(graph), enumerate_lattice(other), psi)
    theirs = {t.complement: t for t in maximal_tails(other)}
    for tail in maximal_tails(graph):
        image = theirs.get(psi[tail.complement])
        if image is None or image.kind is not tail.kind:
            return tail
    return None


def tau_matching(graph: Graph, other: Graph, psi: Mapping[HSSet, HSSet]) -> bool:
    """psi maps tails to tails of the same kind."""
    return tau_mismatch(graph, other, psi) is None


@dataclass(frozen=True)
class TailCrosscheck:
    tail: MaximalTail
    subquotient: SubquotientK
    pattern: str
    cone_is_group: Answer


def ktheory_tail_crosscheck(graph: Graph, tail: MaximalTail) -> TailCrosscheck:
    """Compare the cycle-based tail kind with the subquotient K-theory.

    AF tails need i0 injective and i1 surjective; circle tails need K0 and
    K1 of the subquotient to be Z and not the AF pattern. The cone of the
    subquotient is a group exactly for purely infinite simple tails, so a
    decided cone answer is checked against the kind as well.

    Raises:
        InconsistentClassifiers: if the two classifications disagree
    """
    upper = tau_successor(graph, tail) if tail.kind is TailKind.CIRCLE else tail.successor
    sub = subquotient_k(graph, tail.complement, upper)
    if sub.af_pattern:
        pattern = "af"
    elif sub.circle_pattern:
        pattern = "circle"
    else:
        pattern = "other"

    settings = get_settings()
    big = k_groups(graph, upper)
    generators = {v: big.vector({v: 1}) for v in sub.layer}
    target = tuple(-x for x in big.vector({v: 1 for v in sub.layer}))
    cone = ConeSearch(sub.k0, generators, target, bound=2, cap=settings.monoid_bfs_cap).run()

    detail = {"tail": tail.format(), "kind": tail.kind.value, "pattern": pattern}
    if tail.kind is TailKind.AF and pattern != "af":
        raise InconsistentClassifiers("AF tail without the AF K-theory pattern", **detail)
    if tail.kind is TailKind.CIRCLE and pattern != "circle":
        raise InconsistentClassifiers("Circle tail without the circle K-theory pattern", **detail)
    if tail.kind is not TailKind.PURELY_INFINITE_SIMPLE and cone.status is Answer.YES:
        raise InconsistentClassifiers("Finite tail with a group positive cone", **detail)
    if tail.kind is TailKind.PURELY_INFINITE_SIMPLE and cone.status is Answer.NO:
        raise InconsistentClassifiers("Purely infinite tail with a proper positive cone", **detail)
    return TailCrosscheck(tail, sub, pattern, cone.status)


# --- verdicts -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PsiReport:
    psi: dict[HSSet, HSSet]
    conclusion: Conclusion
    nodes_match: bool
    tau_matched: bool
    offending_tail: MaximalTail | None = None
    phi1: DiagramIsoSearch | None = None
    phi0: DiagramIsoSearch | None = None
    ext2: FGAbelianGroup | None = None
    obstruction: ZeroTest | None = None
    circle_pairs: tuple[tuple[TailCrosscheck, TailCrosscheck], ...] = ()
    notes: tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class Verdict:
    graph: Graph
    other: Graph
    conclusion: Conclusion
    reports: tuple[PsiReport, ...]
    pi_proxy: tuple[bool, bool]
    notes: tuple[str, ...] = field(default=())

    @property
    def psi_found(self) -> list[dict[HSSet, HSSet]]:
        return [r.psi for r in self.reports]

    @property
    def phi0_found(self) -> list[DiagramIsoSearch | None]:
        return [r.phi0 for r in self.reports]

    @property
    def phi1_found(self) -> list[DiagramIsoSearch | None]:
        return [r.phi1 for r in self.reports]

    @property
    def tau_matched(self) -> bool:
        return any(r.tau_matched for r in self.reports)

    @property
    def best(self) -> PsiReport | None:
        if not self.reports:
            return None
        return max(self.reports, key=lambda r: r.conclusion.strength)


def eta_morphism(
    graph: Graph,
    other: Graph,
    psi: Mapping[HSSet, HSSet],
    components: Mapping[HSSet, Sequence[Sequence[int]]],
) -> DiagramMorphism:
    """K1(G) -> psi*K1(G') from component matrices (missing nodes are zero)."""
    source = build_k_diagram(graph, 1)
    target = pullback_diagram(psi, build_k_diagram(other, 1))
    maps = {}
    for w in source.index:
        rows = components.get(w)
        x, y = source.nodes[w], target.nodes[w]
        matrix = (
            IntMatrix.zeros(y.generators, x.generators)
            if rows is None
            else IntMatrix.from_rows(rows, x.generators)
        )
        maps[w] = GroupHom(x, y, matrix)
    return DiagramMorphism(source, target, maps)


def _circle_pairs(
    graph: Graph,
    other: Graph,
    psi: Mapping[HSSet, HSSet],
) -> tuple[tuple[TailCrosscheck, TailCrosscheck], ...]:
    theirs = {t.complement: t for t in maximal_tails(other)}
    pairs = []
    for tail in maximal_tails(graph):
        if tail.kind is TailKind.CIRCLE:
            image = theirs[psi[tail.complement]]
            pairs.append(
                (ktheory_tail_crosscheck(graph, tail), ktheory_tail_crosscheck(other, image))
            )
    return tuple(pairs)


def _examine(
    graph: Graph,
    other: Graph,
    psi: dict[HSSet, HSSet],
    pi_proxy: bool,
    eta: Mapping[HSSet, Sequence[Sequence[int]]] | None,
) -> PsiReport:
    offending = tau_mismatch(graph, other, psi)
    tau_ok = offending is None
    nodes_ok = all(
        k_groups(graph, w).k0.is_isomorphic(k_groups(other, psi[w]).k0)
        and k_groups(graph, w).k1.is_isomorphic(k_groups(other, psi[w]).k1)
        for w in psi
    )
    if not nodes_ok:
        return PsiReport(psi, Conclusion.INVARIANTS_DIFFER, False, tau_ok, offending)

    try:
        phi1 = find_diagram_isos(graph, other, psi, 1, limit=1)
        phi0 = find_diagram_isos(graph, other, psi, 0, limit=1)
    except CapExceeded as exc:
        return PsiReport(
            psi,
            Conclusion.UNDECIDED if tau_ok else Conclusion.INVARIANTS_DIFFER,
            True,
            tau_ok,
            offending,
            notes=(exc.message,),
        )

    confirmed = bool(phi1.isomorphisms) and bool(phi0.confirmed)
    if confirmed:
        check(
            tau_ok,
            "diagram isomorphisms exist but tails do not correspond",
            tail=offending.format() if offending else None,
        )
    if not tau_ok:
        return PsiReport(psi, Conclusion.INVARIANTS_DIFFER, True, False, offending, phi1, phi0)

    missing = [s for s in (phi1, phi0) if not s.isomorphisms]
    if missing:
        decided = all(s.exhaustive for s in missing)
        return PsiReport(
            psi,
            Conclusion.INVARIANTS_DIFFER if decided else Conclusion.UNDECIDED,
            True,
            True,
            None,
            phi1,
            phi0,
            notes=() if decided else ("no diagram isomorphism within the search box",),
        )
    if not confirmed:
        return PsiReport(
            psi,
            Conclusion.UNDECIDED,
            True,
            True,
            None,
            phi1,
            phi0,
            notes=("positive cone preservation unconfirmed within the search bound",),
        )

    ext2 = ext_groups(graph, pullback_diagram(psi, build_k_diagram(other, 1))).ext2
    pairs = _circle_pairs(graph, other, psi)
    notes = [] if pi_proxy else [HOMOTOPY_NOTE]
    obstruction = None
    if ext2.is_trivial():
        conclusion = Conclusion.STABLY_ISOMORPHIC if pi_proxy else Conclusion.HOMOTOPY_EQUIVALENT
    else:
        conclusion = (
            Conclusion.STABLY_ISOMORPHIC_IF_OBSTRUCTION_VANISHES
            if pi_proxy
            else Conclusion.HOMOTOPY_EQUIVALENT_IF_OBSTRUCTION_VANISHES
        )
        notes.append(f"Ext^2 = {ext2.describe()}; the obstruction of a lift is not computed")
        if eta is not None:
            target = pullback_diagram(psi, build_k_diagram(other, 1))
            obstruction = represents_zero_ext2(
                graph, target, eta_morphism(graph, other, psi, eta)
            )
            if obstruction.is_zero:
                notes.append("supplied obstruction represents zero in Ext^2")
            else:
                conclusion = Conclusion.INVARIANTS_ISOMORPHIC_OBSTRUCTION_UNRESOLVED
    return PsiReport(
        psi,
        conclusion,
        True,
        True,
        None,
        phi1,
        phi0,
        ext2,
        obstruction,
        pairs,
        tuple(notes),
    )


def compare_verdict(
    graph: Graph,
    other: Graph,
    eta: Mapping[HSSet, Sequence[Sequence[int]]] | None = None,
    bound: int | None = None,
    threads: int | None = None,
) -> Verdict:
    """Classification verdict for C*(G) against C*(G').

    ``eta`` optionally gives component matrices of a difference morphism
    K1(G) -> psi*K1(G') used to test the lifting obstruction.

    Raises:
        TooLarge: if either lattice exceeds the enumeration bound
    """
    threads = get_settings().threads if threads is None else threads
    with timed("compare_verdict"):
        lattice = enumerate_lattice(graph, bound)
        other_lattice = enumerate_lattice(other, bound)
        proxies = (
            all(t.kind is TailKind.PURELY_INFINITE_SIMPLE for t in maximal_tails(graph, bound)),
            all(t.kind is TailKind.PURELY_INFINITE_SIMPLE for t in maximal_tails(other, bound)),
        )
        pi_proxy = all(proxies)
        notes = [f"pi_proxy: {PI_PROXY_DEFINITION}"]

        try:
            isos = find_lattice_isos(lattice, other_lattice)
        except CapExceeded as exc:
            verdict = Verdict(
                graph, other, Conclusion.UNDECIDED, (), proxies, tuple(notes + [exc.message])
            )
            record_verdict(verdict.conclusion.value)
            return verdict

        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            reports = tuple(
                pool.map(lambda psi: _examine(graph, other, psi, pi_proxy, eta), isos)
            )

    if reports:
        conclusion = max((r.conclusion for r in reports), key=lambda c: c.strength)
    else:
        conclusion = Conclusion.INVARIANTS_DIFFER
        notes.append("ideal lattices are not order isomorphic")
    verdict = Verdict(graph, other, conclusion, reports, proxies, tuple(notes))
    record_verdict(conclusion.value)
    logger.info(
        "verdict_rendered",
        extra={
            "conclusion": conclusion.value,
            "lattice_isos": len(isos),
            "pi_proxy": list(proxies),
        },
    )
    return verdict
