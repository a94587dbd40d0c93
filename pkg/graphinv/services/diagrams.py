"""Diagrams of abelian groups over the ideal poset, their Hom groups and Ext.

A diagram assigns a group to each index element W and a structure map to
each comparable pair W1 <= W2. Hom groups of diagrams are computed by
solving the naturality constraints over Z on "lifts": a natural
transformation is stored as the flat vector of images of every source
generator in the target generators.

Ext^0..Ext^2 of the K0 diagram with coefficients in Y come from the complex

    Hom(Z[V], Y) --d0--> Hom(Z[V_reg], Y) --d1--> Hom(K1, Y)

where d0 precomposes with id - M and d1 precomposes with the kernel
inclusion.
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

from graphinv.errors import (
    IndexMismatch,
    NotACocycle,
    NotMonotone,
    NotNatural,
    check,
)
from graphinv.services.abelian import (
    FGAbelianGroup,
    GroupHom,
    express_in,
    homology,
    subgroup_presentation,
)
from graphinv.services.graph_core import Graph
from graphinv.services.ideal_lattice import (
    HSSet,
    enumerate_lattice,
    generator,
    join_irreducibles,
)
from graphinv.services.intlinalg import (
    IntMatrix,
    Vector,
    block_diagonal,
    kernel_basis,
)
from graphinv.services.ktheory import maps_between, k_groups

logger = logging.getLogger(__name__)

IndexKind = Literal["p", "s"]


@dataclass(frozen=True, eq=False)
class GroupDiagram:
    index: tuple[HSSet, ...]
    nodes: dict[HSSet, FGAbelianGroup]
    homs: dict[tuple[HSSet, HSSet], GroupHom]
    label: str = ""

    def node(self, w: HSSet) -> FGAbelianGroup:
        return self.nodes[w]

    def hom(self, lower: HSSet, upper: HSSet) -> GroupHom:
        return self.homs[(lower, upper)]

    @cached_property
    def covers(self) -> tuple[tuple[HSSet, HSSet], ...]:
        pairs = []
        for a in self.index:
            above = [b for b in self.index if a < b]
            for b in above:
                if not any(a < c < b for c in above):
                    pairs.append((a, b))
        return tuple(pairs)

    def is_zero(self) -> bool:
        return all(g.is_trivial() for g in self.nodes.values())

    def check_coherence(self) -> None:
        """Identity on equal nodes and composition along every cover."""
        for w in self.index:
            check(
                self.hom(w, w).equals(GroupHom.identity(self.nodes[w])),
                "structure map on a node is not the identity",
                node=w.format(),
            )
        for a, b in self.covers:
            for c in self.index:
                if b <= c:
                    check(
                        self.hom(b, c).compose(self.hom(a, b)).equals(self.hom(a, c)),
                        "structure maps do not compose",
                        chain=[a.format(), b.format(), c.format()],
                    )


@dataclass(frozen=True, eq=False)
class DiagramMorphism:
    source: GroupDiagram
    target: GroupDiagram
    components: dict[HSSet, GroupHom]

    def is_natural(self) -> bool:
        for a, b in self.source.covers:
            left = self.target.hom(a, b).compose(self.components[a])
            right = self.components[b].compose(self.source.hom(a, b))
            if not left.equals(right):
                return False
        return True

    def is_isomorphism(self) -> bool:
        return self.is_natural() and all(c.is_isomorphism() for c in self.components.values())

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components.values())


def index_elements(graph: Graph, index: IndexKind = "p", bound: int | None = None) -> tuple[HSSet, ...]:
    """The index poset: the whole lattice ("p") or its join-irreducibles ("s")."""
    lattice = enumerate_lattice(graph, bound)
    if index == "s":
        return tuple(join_irreducibles(lattice))
    return lattice.elements


def _comparable_pairs(index: Sequence[HSSet]) -> list[tuple[HSSet, HSSet]]:
    return [(a, b) for a in index for b in index if a <= b]


def build_k_diagram(
    graph: Graph,
    degree: int,
    index: IndexKind = "p",
    bound: int | None = None,
) -> GroupDiagram:
    """The K0 (degree 0) or K1 (degree 1) diagram of C*(G) over its ideals."""
    check(degree in (0, 1), "degree must be 0 or 1", degree=degree)
    elements = index_elements(graph, index, bound)
    data = {w: k_groups(graph, w) for w in elements}
    nodes = {w: (d.k0 if degree == 0 else d.k1) for w, d in data.items()}
    homs = {}
    for a, b in _comparable_pairs(elements):
        maps = maps_between(data[a], data[b])
        homs[(a, b)] = maps[degree]
    diagram = GroupDiagram(elements, nodes, homs, label=f"K{degree}")
    diagram.check_coherence()
    return diagram


def free_vertex_diagram(
    graph: Graph,
    vertices: frozenset[str],
    index: IndexKind = "p",
    bound: int | None = None,
) -> GroupDiagram:
    """Z[S] over the ideal poset: node W is free on sorted(W & S)."""
    return _free_over(graph, graph.require(vertices), index_elements(graph, index, bound))


def pullback_diagram(psi: Mapping[HSSet, HSSet], target: GroupDiagram) -> GroupDiagram:
    """psi*Y: node W is Y at psi(W), structure maps pulled back.

    Raises:
        NotMonotone: if psi does not preserve the order
        IndexMismatch: if psi leaves the index of Y
    """
    index = tuple(sorted(psi, key=lambda h: h.sort_key))
    for w in index:
        if psi[w] not in target.nodes:
            raise IndexMismatch(
                f"{psi[w].format()} is not an index element of the diagram",
                element=psi[w].format(),
            )
    for a, b in _comparable_pairs(index):
        if not psi[a] <= psi[b]:
            raise NotMonotone(
                "Map does not preserve the order",
                first=a.format(),
                second=b.format(),
            )
    nodes = {w: target.nodes[psi[w]] for w in index}
    homs = {(a, b): target.hom(psi[a], psi[b]) for a, b in _comparable_pairs(index)}
    return GroupDiagram(index, nodes, homs, label=f"pullback({target.label})")


def _require_same_index(x: GroupDiagram, y: GroupDiagram) -> None:
    if set(x.index) != set(y.index):
        raise IndexMismatch(
            "Diagrams have different index posets",
            source=[w.format() for w in x.index],
            target=[w.format() for w in y.index],
        )


@dataclass(frozen=True)
class _Layout:
    """Position of the image of generator j of X_W inside a flat lift."""

    slots: dict[tuple[HSSet, int], tuple[int, int]]
    size: int

    @classmethod
    def build(cls, x: GroupDiagram, y: GroupDiagram) -> "_Layout":
        slots = {}
        offset = 0
        for w in x.index:
            width = y.nodes[w].generators
            for j in range(x.nodes[w].generators):
                slots[(w, j)] = (offset, width)
                offset += width
        return cls(slots, offset)

    def read(self, lift: Sequence[int], w: HSSet, j: int) -> Vector:
        start, width = self.slots[(w, j)]
        return tuple(lift[start : start + width])


class HomGroup:
    """Hom(X, Y) as a presented group whose generators are explicit morphisms."""

    def __init__(self, source: GroupDiagram, target: GroupDiagram):
        _require_same_index(source, target)
        self.source = source
        self.target = target
        self.layout = _Layout.build(source, target)
        self.zero_lifts = self._zero_lifts()

    def _zero_lifts(self) -> FGAbelianGroup:
        columns = []
        for (w, _), (start, width) in self.layout.slots.items():
            for r in self.target.nodes[w].relations.columns():
                column = [0] * self.layout.size
                column[start : start + width] = r
                columns.append(tuple(column))
        return FGAbelianGroup(self.layout.size, IntMatrix.from_columns(columns, self.layout.size))

    @cached_property
    def _presentation(self) -> tuple[FGAbelianGroup, IntMatrix]:
        raise NotImplementedError

    @property
    def group(self) -> FGAbelianGroup:
        return self._presentation[0]

    @property
    def embed(self) -> IntMatrix:
        """Columns are lifts of the generating morphisms."""
        return self._presentation[1]

    def lift(self, element: Sequence[int]) -> Vector:
        return self.embed.apply(element)

    def from_lift(self, lift: Sequence[int]) -> Vector | None:
        """Generator coefficients of the morphism with this lift, or None."""
        return express_in(self.embed, self.zero_lifts, lift)

    def lift_of(self, morphism: DiagramMorphism) -> Vector:
        lift = [0] * self.layout.size
        for (w, j), (start, width) in self.layout.slots.items():
            lift[start : start + width] = morphism.components[w].matrix.column(j)
        return tuple(lift)

    def morphism(self, lift: Sequence[int]) -> DiagramMorphism:
        components = {}
        for w in self.source.index:
            columns = [
                self.layout.read(lift, w, j) for j in range(self.source.nodes[w].generators)
            ]
            components[w] = GroupHom(
                self.source.nodes[w],
                self.target.nodes[w],
                IntMatrix.from_columns(columns, self.target.nodes[w].generators),
            )
        return DiagramMorphism(self.source, self.target, components)

    def to_morphism(self, element: Sequence[int]) -> DiagramMorphism:
        return self.morphism(self.lift(element))

    def generating_morphisms(self) -> list[DiagramMorphism]:
        return [self.morphism(c) for c in self.embed.columns()]


class SolvedHomGroup(HomGroup):
    """Hom(X, Y) by solving naturality and well-definedness over Z."""

    @cached_property
    def _presentation(self) -> tuple[FGAbelianGroup, IntMatrix]:
        rows: list[dict[int, int]] = []
        slack: list[tuple[int, IntMatrix]] = []

        def constrain(expressions: list[dict[int, int]], relations: IntMatrix) -> None:
            slack.append((len(rows), relations))
            rows.extend(expressions)

        for w in self.source.index:
            width = self.target.nodes[w].generators
            for r in self.source.nodes[w].relations.columns():
                exprs = [dict() for _ in range(width)]
                for j, rj in enumerate(r):
                    if rj:
                        start, _ = self.layout.slots[(w, j)]
                        for i in range(width):
                            exprs[i][start + i] = exprs[i].get(start + i, 0) + rj
                constrain(exprs, self.target.nodes[w].relations)

        for a, b in self.source.covers:
            iota_y = self.target.hom(a, b).matrix
            iota_x = self.source.hom(a, b).matrix
            width = self.target.nodes[b].generators
            for j in range(self.source.nodes[a].generators):
                exprs = [dict() for _ in range(width)]
                start_a, width_a = self.layout.slots[(a, j)]
                for i in range(width):
                    for l in range(width_a):
                        if iota_y[i, l]:
                            exprs[i][start_a + l] = exprs[i].get(start_a + l, 0) + iota_y[i, l]
                for k in range(self.source.nodes[b].generators):
                    coefficient = iota_x[k, j]
                    if coefficient:
                        start_b, _ = self.layout.slots[(b, k)]
                        for i in range(width):
                            exprs[i][start_b + i] = exprs[i].get(start_b + i, 0) - coefficient
                constrain(exprs, self.target.nodes[b].relations)

        n = self.layout.size
        total_slack = sum(r.cols for _, r in slack)
        matrix = [[0] * (n + total_slack) for _ in rows]
        for i, expr in enumerate(rows):
            for col, value in expr.items():
                matrix[i][col] = value
        offset = n
        for first_row, relations in slack:
            for i in range(relations.rows):
                for k in range(relations.cols):
                    matrix[first_row + i][offset + k] = relations[i, k]
            offset += relations.cols

        system = IntMatrix.from_rows(matrix, n + total_slack)
        spanning = [v[:n] for v in kernel_basis(system)]
        logger.debug(
            "hom_system_solved",
            extra={"unknowns": n, "constraints": len(rows), "spanning": len(spanning)},
        )
        return subgroup_presentation(spanning, self.zero_lifts)


class ProductHomGroup(HomGroup):
    """Hom(Z[S], Y) realised as the product of Y at <v> over v in S."""

    def __init__(self, graph: Graph, vertices: frozenset[str], target: GroupDiagram):
        source = _free_over(graph, vertices, target.index)
        super().__init__(source, target)
        self.graph = graph
        self.vertices = tuple(sorted(vertices))
        self.generated = {v: generator(graph, v) for v in self.vertices}
        for v, g in self.generated.items():
            if g not in target.nodes:
                raise IndexMismatch(f"<{v}> is not an index element", vertex=v)
        self.bases = {w: sorted(w.members & vertices) for w in target.index}
        self.blocks = [target.nodes[self.generated[v]] for v in self.vertices]

    @cached_property
    def _offsets(self) -> dict[str, tuple[int, int]]:
        offsets = {}
        start = 0
        for v, block in zip(self.vertices, self.blocks):
            offsets[v] = (start, block.generators)
            start += block.generators
        return offsets

    @cached_property
    def _presentation(self) -> tuple[FGAbelianGroup, IntMatrix]:
        group = FGAbelianGroup(
            sum(b.generators for b in self.blocks),
            block_diagonal([b.relations for b in self.blocks]),
        )
        columns = []
        for v, block in zip(self.vertices, self.blocks):
            for g in range(block.generators):
                family = {v: block.basis_vector(g)}
                columns.append(self.family_lift(family))
        return group, IntMatrix.from_columns(columns, self.layout.size)

    def family_lift(self, family: Mapping[str, Sequence[int]]) -> Vector:
        """Lift of xi with xi_W(delta_u) = iota_{W,<u>}(y_u)."""
        lift = [0] * self.layout.size
        for w in self.source.index:
            for j, u in enumerate(self.bases[w]):
                y = family.get(u)
                if y is None or not any(y):
                    continue
                start, width = self.layout.slots[(w, j)]
                lift[start : start + width] = self.target.hom(self.generated[u], w)(y)
        return tuple(lift)

    def family_to_vector(self, family: Mapping[str, Sequence[int]]) -> Vector:
        vector = [0] * self.group.generators
        for v, (start, width) in self._offsets.items():
            y = family.get(v)
            if y is not None:
                check(len(y) == width, "family entry has the wrong length", vertex=v)
                vector[start : start + width] = y
        return tuple(vector)

    def vector_to_family(self, vector: Sequence[int]) -> dict[str, Vector]:
        return {
            v: tuple(vector[start : start + width]) for v, (start, width) in self._offsets.items()
        }

    def from_lift(self, lift: Sequence[int]) -> Vector:
        family = {}
        for v in self.vertices:
            g = self.generated[v]
            family[v] = self.layout.read(lift, g, self.bases[g].index(v))
        return self.family_to_vector(family)

    def family_to_morphism(self, family: Mapping[str, Sequence[int]]) -> DiagramMorphism:
        return self.morphism(self.family_lift(family))

    def morphism_to_family(self, morphism: DiagramMorphism) -> dict[str, Vector]:
        return self.vector_to_family(self.from_lift(self.lift_of(morphism)))


def _free_over(graph: Graph, vertices: frozenset[str], index: Sequence[HSSet]) -> GroupDiagram:
    bases = {w: sorted(w.members & vertices) for w in index}
    nodes = {w: FGAbelianGroup.free(len(bases[w])) for w in index}
    homs = {}
    for a, b in _comparable_pairs(index):
        position = {v: i for i, v in enumerate(bases[b])}
        columns = [tuple(int(i == position[v]) for i in range(len(bases[b]))) for v in bases[a]]
        homs[(a, b)] = GroupHom(nodes[a], nodes[b], IntMatrix.from_columns(columns, len(bases[b])))
    return GroupDiagram(tuple(index), nodes, homs, label="Z[S]")


def hom_free_diagram(graph: Graph, vertices: frozenset[str] | None, target: GroupDiagram) -> ProductHomGroup:
    """Hom(Z[S], Y) as the product of Y_<v> for v in S."""
    vertices = graph.vertex_set if vertices is None else graph.require(vertices)
    return ProductHomGroup(graph, vertices, target)


def hom_diagram(source: GroupDiagram, target: GroupDiagram) -> SolvedHomGroup:
    """Natural transformations source -> target with generating morphisms."""
    return SolvedHomGroup(source, target)


@dataclass(frozen=True, eq=False)
class CochainComplex:
    graph: Graph
    index: IndexKind
    c0: HomGroup
    c1: HomGroup
    c2: HomGroup
    d0: GroupHom
    d1: GroupHom
    k1: GroupDiagram


def _positions(diagram: GroupDiagram, graph: Graph, vertices: frozenset[str]) -> dict[HSSet, dict[str, int]]:
    return {
        w: {v: i for i, v in enumerate(sorted(w.members & vertices))} for w in diagram.index
    }


def cochain_complex(graph: Graph, target: GroupDiagram, index: IndexKind = "p") -> CochainComplex:
    """The complex computing Ext of the K0 diagram with coefficients in Y.

    Raises:
        IndexMismatch: if Y is not indexed by the chosen ideal poset of G
    """
    elements = index_elements(graph, index)
    if set(target.index) != set(elements):
        raise IndexMismatch(
            "Coefficient diagram is not indexed by the ideal poset of the graph",
            expected=len(elements),
            got=len(target.index),
        )
    vertices = graph.vertex_set
    regular = frozenset(v for v in graph.vertices if graph.is_regular(v))
    k1 = build_k_diagram(graph, 1, index)

    if index == "p":
        c0: HomGroup = hom_free_diagram(graph, vertices, target)
        c1: HomGroup = hom_free_diagram(graph, regular, target)
    else:
        c0 = hom_diagram(_free_over(graph, vertices, elements), target)
        c1 = hom_diagram(_free_over(graph, regular, elements), target)
    c2 = hom_diagram(k1, target)

    pos1 = _positions(target, graph, regular)

    def d1_lift(lift: Sequence[int]) -> Vector:
        out = [0] * c2.layout.size
        for w in elements:
            data = k_groups(graph, w)
            width = target.nodes[w].generators
            for j, b in enumerate(data.k1_basis):
                value = [0] * width
                for u, coefficient in zip(data.regular, b):
                    if coefficient:
                        slot = c1.layout.read(lift, w, pos1[w][u])
                        value = [a + coefficient * x for a, x in zip(value, slot)]
                start, _ = c2.layout.slots[(w, j)]
                out[start : start + width] = value
        return tuple(out)

    d0 = _induced_hom(c0, c1, _d0_on_lifts(graph, elements, target, c0, c1))
    d1 = _induced_hom(c1, c2, d1_lift)
    check(d1.compose(d0).is_zero(), "d1 after d0 is not zero")
    return CochainComplex(graph, index, c0, c1, c2, d0, d1, k1)


@dataclass(frozen=True, eq=False)
class K0Morphisms:
    """Hom(K0 diagram, Y) = ker d0 inside the product of Y at <v>."""

    group: FGAbelianGroup
    embed: IntMatrix
    families: ProductHomGroup
    source: GroupDiagram

    def family(self, element: Sequence[int]) -> dict[str, Vector]:
        return self.families.vector_to_family(self.embed.apply(element))

    def morphism(self, family: Mapping[str, Sequence[int]]) -> DiagramMorphism:
        """The K0 diagram morphism sending pi(delta_v) at W to iota_{W,<v>}(y_v)."""
        free = self.families.family_to_morphism(family)
        components = {
            w: GroupHom(self.source.nodes[w], free.target.nodes[w], free.components[w].matrix)
            for w in self.source.index
        }
        return DiagramMorphism(self.source, free.target, components)


def k0_morphisms(graph: Graph, target: GroupDiagram) -> K0Morphisms:
    """Morphisms out of the K0 diagram, as the kernel of d0."""
    elements = index_elements(graph)
    regular = frozenset(v for v in graph.vertices if graph.is_regular(v))
    c0 = hom_free_diagram(graph, graph.vertex_set, target)
    c1 = hom_free_diagram(graph, regular, target)
    d0 = _induced_hom(c0, c1, _d0_on_lifts(graph, elements, target, c0, c1))
    group, embed = d0.kernel()
    return K0Morphisms(group, embed, c0, build_k_diagram(graph, 0))


def _d0_on_lifts(graph: Graph, elements, target: GroupDiagram, c0: HomGroup, c1: HomGroup):
    pos0 = _positions(target, graph, graph.vertex_set)
    pos1 = _positions(target, graph, frozenset(v for v in graph.vertices if graph.is_regular(v)))

    def d0_lift(lift: Sequence[int]) -> Vector:
        out = [0] * c1.layout.size
        for w in elements:
            for u, j in pos1[w].items():
                value = list(c0.layout.read(lift, w, pos0[w][u]))
                for s in graph.sources_into(u):
                    value = [a - b for a, b in zip(value, c0.layout.read(lift, w, pos0[w][s]))]
                start, width = c1.layout.slots[(w, j)]
                out[start : start + width] = value
        return tuple(out)

    return d0_lift


def _induced_hom(source: HomGroup, target: HomGroup, on_lifts) -> GroupHom:
    columns = []
    for lift in source.embed.columns():
        image = target.from_lift(on_lifts(lift))
        check(image is not None, "cochain map leaves the Hom group")
        columns.append(image)
    return GroupHom(
        source.group,
        target.group,
        IntMatrix.from_columns(columns, target.group.generators),
    )


@dataclass(frozen=True, eq=False)
class ExtGroups:
    ext0: FGAbelianGroup
    ext1: FGAbelianGroup
    ext2: FGAbelianGroup
    complex: CochainComplex
    ext1_embed: IntMatrix

    def describe(self) -> tuple[str, str, str]:
        return (self.ext0.describe(), self.ext1.describe(), self.ext2.describe())


def ext_groups(graph: Graph, target: GroupDiagram, index: IndexKind = "p") -> ExtGroups:
    """Ext^0 = ker d0, Ext^1 = ker d1 / im d0, Ext^2 = coker d1."""
    complex_ = cochain_complex(graph, target, index)
    ext1, embed = homology(complex_.d0, complex_.d1)
    result = ExtGroups(
        ext0=complex_.d0.kernel()[0],
        ext1=ext1,
        ext2=complex_.d1.cokernel(),
        complex=complex_,
        ext1_embed=embed,
    )
    logger.debug(
        "ext_computed",
        extra={"graph_vertices": len(graph.vertices), "ext": list(result.describe())},
    )
    return result


@dataclass(frozen=True)
class ZeroTest:
    is_zero: bool
    witness: dict[str, Vector] | None = None
    coordinates: Vector | None = None


def hom_family(hom_group: HomGroup, element: Sequence[int]) -> dict[str, Vector]:
    if isinstance(hom_group, ProductHomGroup):
        return hom_group.vector_to_family(element)
    lift = hom_group.lift(element)
    family = {}
    for w in hom_group.source.index:
        for j in range(hom_group.source.nodes[w].generators):
            family[f"{w.format()}#{j}"] = hom_group.layout.read(lift, w, j)
    return family


def represents_zero_ext2(
    graph: Graph,
    target: GroupDiagram,
    eta: DiagramMorphism,
    index: IndexKind = "p",
) -> ZeroTest:
    """Decide whether eta: K1 -> Y factors through the kernel inclusion.

    On success the witness is a family beta (y_v for regular v) with
    d1(beta) = eta.

    Raises:
        NotNatural: if eta is not a natural transformation
    """
    if not eta.is_natural():
        raise NotNatural("Obstruction morphism is not natural")
    complex_ = cochain_complex(graph, target, index)
    coordinates = complex_.c2.from_lift(complex_.c2.lift_of(eta))
    if coordinates is None:
        raise NotNatural("Obstruction morphism is not a morphism of the K1 diagram")
    beta = complex_.d1.preimage(coordinates)
    if beta is None:
        return ZeroTest(False, coordinates=complex_.d1.cokernel().reduce(coordinates))
    return ZeroTest(True, witness=hom_family(complex_.c1, beta))


def ext1_class(
    graph: Graph,
    target: GroupDiagram,
    family: Mapping[str, Sequence[int]],
) -> ZeroTest:
    """Class of a cocycle family (y_v for regular v) in Ext^1.

    Zero iff the family lies in the image of d0; the witness is then a
    family on all vertices mapping onto it.

    Raises:
        NotACocycle: if d1 does not vanish on the family
    """
    ext = ext_groups(graph, target, "p")
    complex_ = ext.complex
    c1 = complex_.c1
    check(isinstance(c1, ProductHomGroup), "cocycle families need the product realisation")
    element = c1.family_to_vector(family)
    if not complex_.c2.group.is_zero(complex_.d1(element)):
        raise NotACocycle("Family does not vanish on the K1 diagram")
    z = express_in(ext.ext1_embed, c1.group, element)
    check(z is not None, "cocycle does not lie in the kernel of d1")
    coordinates = ext.ext1.reduce(z)
    if any(coordinates):
        return ZeroTest(False, coordinates=coordinates)
    y = complex_.d0.preimage(element)
    check(y is not None, "zero class without a preimage")
    return ZeroTest(True, witness=hom_family(complex_.c0, y), coordinates=coordinates)
