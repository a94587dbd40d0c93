"""K-theory of the ideals of a graph C*-algebra.

For a hereditary saturated W the K-groups come from the exact sequence

    0 -> K1(W) -> Z[W_reg] --(id - M)--> Z[W] --pi--> K0(W) -> 0

with (M c)(v) = sum of c over the ranges of edges leaving v. K0 is the
cokernel, with positive cone generated by the vertex classes pi(delta_v);
K1 is the (free) kernel, stored with a canonical Hermite basis.
"""

import itertools
import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache

from graphinv.config import get_settings
from graphinv.errors import (
    NotHereditarySaturated,
    NotNested,
    NotSupportedInW,
    check,
)
from graphinv.services.abelian import FGAbelianGroup, GroupHom
from graphinv.services.graph_core import Graph
from graphinv.services.ideal_lattice import HSSet, hs_closure, is_hereditary_saturated
from graphinv.services.intlinalg import IntMatrix, Vector, hstack, kernel_basis, solve

logger = logging.getLogger(__name__)


class Answer(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ConeAnswer:
    """Three-valued membership answer with a witness or a reason."""

    status: Answer
    witness: dict[str, int] | None = None
    reason: str | None = None
    bound: int | None = None

    @property
    def is_member(self) -> bool:
        return self.status is Answer.YES


@dataclass(frozen=True, eq=False)
class KData:
    """K0 and K1 of the ideal attached to a hereditary saturated set W."""

    graph: Graph
    w: HSSet
    vertices: tuple[str, ...]
    regular: tuple[str, ...]
    adjacency: IntMatrix
    k0: FGAbelianGroup
    k1: FGAbelianGroup
    k1_basis: tuple[Vector, ...]

    @cached_property
    def _position(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _regular_position(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.regular)}

    def vector(self, c: Mapping[str, int]) -> Vector:
        """Integer vector on W for a vertex-indexed combination."""
        outside = sorted(v for v, n in c.items() if n and v not in self._position)
        if outside:
            raise NotSupportedInW(
                f"Vertex '{outside[0]}' is outside {self.w.format()}",
                vertex=outside[0],
                w=self.w.format(),
            )
        x = [0] * len(self.vertices)
        for v, n in c.items():
            if n:
                x[self._position[v]] += n
        return tuple(x)

    def regular_vector(self, c: Mapping[str, int]) -> Vector:
        x = [0] * len(self.regular)
        for v, n in c.items():
            if n:
                x[self._regular_position[v]] += n
        return tuple(x)

    def pi(self, c: Mapping[str, int]) -> Vector:
        """Canonical K0 coordinates of the class of c."""
        return self.k0.reduce(self.vector(c))

    def generator_class(self, v: str) -> Vector:
        return self.pi({v: 1})

    def kappa(self, coordinates: Sequence[int]) -> Vector:
        """Kernel vector in Z[W_reg] for K1 coordinates."""
        x = [0] * len(self.regular)
        for c, b in zip(coordinates, self.k1_basis):
            for i, bi in enumerate(b):
                x[i] += c * bi
        return tuple(x)

    def k1_coordinates(self, x: Sequence[int]) -> Vector:
        """K1 coordinates of a kernel vector of id - M."""
        basis = IntMatrix.from_columns(self.k1_basis, len(self.regular))
        found = solve(basis, x)
        check(found is not None, "vector is not in the kernel of id - M", w=self.w.format())
        return found


def as_hsset(graph: Graph, w: HSSet | Iterable[str]) -> HSSet:
    members = w.members if isinstance(w, HSSet) else graph.require(w)
    if not is_hereditary_saturated(graph, members):
        raise NotHereditarySaturated(
            "Vertex set is not hereditary and saturated",
            members=sorted(members),
        )
    return HSSet(frozenset(members))


def k_groups(graph: Graph, w: HSSet | Iterable[str]) -> KData:
    """K0 and K1 of the ideal of W, with exactness witnesses.

    Raises:
        NotHereditarySaturated: if W is not hereditary and saturated
    """
    return _k_groups(graph, as_hsset(graph, w))


@lru_cache(maxsize=4096)
def _k_groups(graph: Graph, w: HSSet) -> KData:
    vertices = tuple(sorted(w.members))
    regular = tuple(v for v in vertices if graph.is_regular(v))
    position = {v: i for i, v in enumerate(vertices)}

    columns = []
    for u in regular:
        column = [0] * len(vertices)
        column[position[u]] += 1
        for s in graph.sources_into(u):
            column[position[s]] -= 1
        columns.append(tuple(column))
    adjacency = IntMatrix.from_columns(columns, len(vertices))

    basis = tuple(kernel_basis(adjacency))
    data = KData(
        graph=graph,
        w=w,
        vertices=vertices,
        regular=regular,
        adjacency=adjacency,
        k0=FGAbelianGroup(len(vertices), adjacency),
        k1=FGAbelianGroup.free(len(basis)),
        k1_basis=basis,
    )
    logger.debug(
        "k_groups_computed",
        extra={"w": w.format(), "k0": data.k0.describe(), "k1": data.k1.describe()},
    )
    return data


def induced_k_maps(
    graph: Graph,
    lower: HSSet | Iterable[str],
    upper: HSSet | Iterable[str],
) -> tuple[GroupHom, GroupHom]:
    """Maps K0(W1) -> K0(W2) and K1(W1) -> K1(W2) induced by W1 <= W2.

    Raises:
        NotNested: if W1 is not contained in W2
    """
    small = k_groups(graph, lower)
    big = k_groups(graph, upper)
    if not small.w.members <= big.w.members:
        raise NotNested(lower=small.w.format(), upper=big.w.format())
    return maps_between(small, big)


def maps_between(small: KData, big: KData) -> tuple[GroupHom, GroupHom]:
    k0_columns = [big.vector({v: 1}) for v in small.vertices]
    k0 = GroupHom(
        small.k0,
        big.k0,
        IntMatrix.from_columns(k0_columns, len(big.vertices)),
    )

    k1_columns = []
    for b in small.k1_basis:
        extended = big.regular_vector(dict(zip(small.regular, b)))
        k1_columns.append(big.k1_coordinates(extended))
    k1 = GroupHom(
        small.k1,
        big.k1,
        IntMatrix.from_columns(k1_columns, len(big.k1_basis)),
    )
    return k0, k1


def is_order_unit(graph: Graph, w: HSSet | Iterable[str], c: Mapping[str, int]) -> bool:
    """A positive element c of Z[W] is an order unit iff supp(c) generates W.

    Raises:
        NotSupportedInW: if c has support outside W
    """
    data = k_groups(graph, w)
    data.vector(c)
    support = {v for v, n in c.items() if n}
    check(all(n >= 0 for n in c.values()), "order unit candidate has a negative coefficient")
    return hs_closure(graph, support) == data.w


class ConeSearch:
    """Decide membership of a target in the monoid generated by labelled elements.

    Complete when the group has free rank at most one, or when some free
    coordinate is strictly positive on every generator; otherwise a bounded
    search answers yes or unknown.
    """

    def __init__(
        self,
        group: FGAbelianGroup,
        generators: Mapping[str, Sequence[int]],
        target: Sequence[int],
        bound: int,
        cap: int,
    ):
        self.group = group
        self.labels = tuple(generators)
        self.gens = [group.reduce(generators[v]) for v in self.labels]
        self.target = group.reduce(target)
        self.bound = bound
        self.cap = cap
        self.ntors = len(group.torsion)
        torsion_relations = [
            tuple(d if i == k else 0 for i in range(group.rank))
            for k, d in enumerate(group.torsion)
        ]
        self.coords = FGAbelianGroup(
            group.rank, IntMatrix.from_columns(torsion_relations, group.rank)
        )

    def _yes(self, coefficients: Sequence[int], indices: Sequence[int] | None = None) -> ConeAnswer:
        indices = range(len(self.labels)) if indices is None else indices
        witness: dict[str, int] = {}
        for i, a in zip(indices, coefficients):
            if a:
                witness[self.labels[i]] = witness.get(self.labels[i], 0) + a
        check(all(a > 0 for a in witness.values()), "cone witness is not positive")
        check(self._sum(witness) == self.target, "cone witness has the wrong class")
        return ConeAnswer(Answer.YES, witness=dict(sorted(witness.items())))

    def _no(self, reason: str) -> ConeAnswer:
        return ConeAnswer(Answer.NO, reason=reason)

    def _sum(self, witness: Mapping[str, int]) -> Vector:
        total = [0] * self.group.rank
        for v, a in witness.items():
            g = self.gens[self.labels.index(v)]
            total = [t + a * x for t, x in zip(total, g)]
        return self.coords.reduce(total)

    def _span(self, indices: Sequence[int], target: Sequence[int]) -> Vector | None:
        spanning = IntMatrix.from_columns([self.gens[i] for i in indices], self.group.rank)
        joint = hstack(spanning, self.coords.relations, rows=self.group.rank)
        found = solve(joint, target)
        return None if found is None else found[: len(indices)]

    def _combination(self, coefficients: Sequence[int], indices: Sequence[int]) -> list[int]:
        total = [0] * self.group.rank
        for i, a in zip(indices, coefficients):
            total = [t + a * x for t, x in zip(total, self.gens[i])]
        return total

    def run(self) -> ConeAnswer:
        if self.coords.is_zero(self.target):
            return ConeAnswer(Answer.YES, witness={})
        rank = self.group.free_rank
        if rank == 0:
            return self._torsion_only(range(len(self.gens)), self.target)
        if rank == 1:
            return self._rank_one()
        return self._higher_rank()

    def _torsion_only(self, indices: Sequence[int], target: Sequence[int]) -> ConeAnswer:
        indices = list(indices)
        a = self._span(indices, target)
        if a is None:
            return self._no("target lies outside the subgroup generated by the vertex classes")
        e = self.group.exponent
        return self._yes([x % e for x in a], indices)

    def _rank_one(self) -> ConeAnswer:
        f = [g[self.ntors] for g in self.gens]
        ft = self.target[self.ntors]
        everything = range(len(self.gens))

        if all(x == 0 for x in f):
            if ft:
                return self._no("free coordinate of the target is nonzero on a torsion cone")
            return self._torsion_only(everything, self.target)

        if any(x > 0 for x in f) and any(x < 0 for x in f):
            return self._mixed_signs(f)

        sign = 1 if any(x > 0 for x in f) else -1
        if sign * ft < 0:
            return self._no("free coordinate separates the target from the cone")

        positive = [i for i in everything if f[i]]
        flat = [i for i in everything if not f[i]]
        weights = [abs(f[i]) for i in positive]
        tried = 0
        for combo in _compositions(weights, sign * ft):
            tried += 1
            if tried > self.cap:
                return ConeAnswer(Answer.UNKNOWN, bound=self.bound, reason="search cap reached")
            partial = self._combination(combo, positive)
            residual = [t - p for t, p in zip(self.target, partial)]
            if not flat:
                if self.coords.is_zero(residual):
                    return self._yes(combo, positive)
                continue
            b = self._span(flat, residual)
            if b is not None:
                e = self.group.exponent
                return self._yes(list(combo) + [x % e for x in b], positive + flat)
        return self._no("exhaustive search over the free coordinate found no combination")

    def _mixed_signs(self, f: Sequence[int]) -> ConeAnswer:
        a = self._span(range(len(self.gens)), self.target)
        if a is None:
            return self._no("target lies outside the subgroup generated by the vertex classes")
        a = list(a)
        p = next(i for i, x in enumerate(f) if x > 0)
        q = next(i for i, x in enumerate(f) if x < 0)
        e = self.group.exponent
        for i in range(len(a)):
            if a[i] >= 0:
                continue
            if f[i] > 0:
                combo = {i: -f[q], q: f[i]}
            elif f[i] < 0:
                combo = {i: f[p], p: -f[i]}
            else:
                combo = {i: 1}
            step = e * combo[i]
            k = -(a[i] // step)
            for j, c in combo.items():
                a[j] += k * e * c
        return self._yes(a)

    def _higher_rank(self) -> ConeAnswer:
        free = range(self.ntors, self.group.rank)
        for k in free:
            column = [g[k] for g in self.gens]
            if all(x >= 0 for x in column) and self.target[k] < 0:
                return self._no(f"free coordinate {k - self.ntors} separates the target")
            if all(x <= 0 for x in column) and self.target[k] > 0:
                return self._no(f"free coordinate {k - self.ntors} separates the target")

        limit = None
        for k in free:
            column = [g[k] for g in self.gens]
            if all(x > 0 for x in column):
                bound = self.target[k] // min(column)
                limit = bound if limit is None else min(limit, bound)

        complete = limit is not None
        max_total = limit if complete else self.bound * len(self.gens)
        tried = 0
        for combo in _bounded_vectors(len(self.gens), max_total):
            # every visited candidate counts, including those over the bound
            tried += 1
            if tried > self.cap:
                return ConeAnswer(Answer.UNKNOWN, bound=self.bound, reason="search cap reached")
            if not complete and max(combo, default=0) > self.bound:
                continue
            total = self._combination(combo, range(len(self.gens)))
            if self.coords.equal(total, self.target):
                return self._yes(combo)
        if complete:
            return self._no("exhaustive search bounded by a positive free coordinate")
        return ConeAnswer(Answer.UNKNOWN, bound=self.bound, reason="no witness within the search bound")


def _compositions(weights: Sequence[int], total: int) -> Iterator[tuple[int, ...]]:
    """Nonnegative a with sum(a_i * weights_i) == total."""
    if not weights:
        if total == 0:
            yield ()
        return
    head, rest = weights[0], weights[1:]
    for a in range(total // head + 1):
        for tail in _compositions(rest, total - a * head):
            yield (a,) + tail


def _bounded_vectors(n: int, max_total: int) -> Iterator[tuple[int, ...]]:
    """Nonnegative integer vectors of length n by increasing total."""
    for total in range(max_total + 1):
        for picks in itertools.combinations_with_replacement(range(n), total):
            counts = [0] * n
            for i in picks:
                counts[i] += 1
            yield tuple(counts)


def positive_cone_member(
    graph: Graph,
    w: HSSet | Iterable[str],
    x: Mapping[str, int],
    bound: int | None = None,
) -> ConeAnswer:
    """Decide whether the class of x in K0(W) lies in the positive cone.

    The positive cone is the image of N[W]. A ``yes`` answer carries a witness
    c in N[W] with pi(c) = pi(x); ``no`` carries a reason; ``unknown`` records
    the search bound that was exhausted.
    """
    settings = get_settings()
    bound = settings.cone_search_bound if bound is None else bound
    data = k_groups(graph, w)
    generators = {v: data.vector({v: 1}) for v in data.vertices}
    answer = ConeSearch(
        data.k0, generators, data.vector(x), bound, settings.monoid_bfs_cap
    ).run()
    if answer.status is Answer.UNKNOWN:
        logger.info("cone_search_inconclusive", extra={"w": data.w.format(), "bound": bound})
    return answer


@dataclass(frozen=True)
class SubquotientK:
    """K-theory of the subquotient between H <= H2 from the six-term sequence."""

    lower: HSSet
    upper: HSSet
    i0: GroupHom
    i1: GroupHom
    k0: FGAbelianGroup
    ker_i0: FGAbelianGroup
    coker_i1: FGAbelianGroup
    layer: tuple[str, ...] = field(default=())

    @property
    def k1_rank(self) -> int:
        return self.ker_i0.free_rank + self.coker_i1.free_rank

    @property
    def af_pattern(self) -> bool:
        """i0 injective and i1 surjective (K1 of the subquotient vanishes)."""
        return self.ker_i0.is_trivial() and self.coker_i1.is_trivial()

    @property
    def circle_pattern(self) -> bool:
        """K0 and K1 of the subquotient are both Z."""
        return (
            self.k0.invariants() == (1, ())
            and self.k1_rank == 1
            and not self.ker_i0.torsion
            and not self.coker_i1.torsion
        )


def subquotient_k(
    graph: Graph,
    lower: HSSet | Iterable[str],
    upper: HSSet | Iterable[str],
) -> SubquotientK:
    """K0 and K1 data of C*(G)_{H2} / C*(G)_{H} for H <= H2.

    The exponential map vanishes and K0 of the ideal maps onto K0 of the
    subquotient, so K0(sub) = coker(i0) and K1(sub) is an extension of
    ker(i0) by coker(i1).

    Raises:
        NotNested: if H is not contained in H2
    """
    i0, i1 = induced_k_maps(graph, lower, upper)
    small = k_groups(graph, lower)
    big = k_groups(graph, upper)
    return SubquotientK(
        lower=small.w,
        upper=big.w,
        i0=i0,
        i1=i1,
        k0=i0.cokernel(),
        ker_i0=i0.kernel()[0],
        coker_i1=i1.cokernel(),
        layer=tuple(sorted(big.w.members - small.w.members)),
    )
