"""Hereditary saturated vertex sets, their lattice, and maximal tails.

A set H is hereditary when r(e) in H forces s(e) in H, and saturated when
every regular vertex whose incoming edges all start in H lies in H. The
hereditary saturated sets of a finite graph form a finite distributive lattice
(join = closure of the union, meet = intersection).
"""

import logging
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache

from graphinv.config import get_settings
from graphinv.errors import NotATail, NotCircle, NotMonotone, TooLarge, check
from graphinv.metrics import record_lattice
from graphinv.services.graph_core import Cycle, Graph, simple_cycles_within

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HSSet:
    """A hereditary saturated vertex set (members only; graph kept by callers)."""

    members: frozenset[str]

    @property
    def sort_key(self) -> tuple:
        return (len(self.members), tuple(sorted(self.members)))

    def __le__(self, other: "HSSet") -> bool:
        return self.members <= other.members

    def __lt__(self, other: "HSSet") -> bool:
        return self.members < other.members

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v: str) -> bool:
        return v in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def format(self) -> str:
        return "{" + ",".join(sorted(self.members)) + "}"

    def __repr__(self) -> str:
        return f"HSSet({self.format()})"


class TailKind(str, Enum):
    AF = "AF"
    PURELY_INFINITE_SIMPLE = "purely_infinite_simple"
    CIRCLE = "circle"


@dataclass(frozen=True)
class MaximalTail:
    """Maximal tail M with its complement Omega(M) and classification."""

    members: frozenset[str]
    kind: TailKind
    complement: HSSet
    successor: HSSet
    tau_cycle: Cycle | None = None

    def format(self) -> str:
        return "{" + ",".join(sorted(self.members)) + "}"


def is_hereditary(graph: Graph, members: Iterable[str]) -> bool:
    h = graph.require(members)
    return all(graph.src[e] in h for e in graph.edges if graph.rng[e] in h)


def is_saturated(graph: Graph, members: Iterable[str]) -> bool:
    h = graph.require(members)
    for v in graph.vertices:
        if v in h or not graph.is_regular(v):
            continue
        if all(s in h for s in graph.sources_into(v)):
            return False
    return True


def is_hereditary_saturated(graph: Graph, members: Iterable[str]) -> bool:
    members = frozenset(members)
    return is_hereditary(graph, members) and is_saturated(graph, members)


def hs_closure(graph: Graph, seeds: Iterable[str]) -> HSSet:
    """Smallest hereditary saturated set containing ``seeds``."""
    h = set(graph.require(seeds))
    stack = list(h)
    while True:
        while stack:
            v = stack.pop()
            for s in graph.sources_into(v):
                if s not in h:
                    h.add(s)
                    stack.append(s)
        saturated = [
            v
            for v in graph.vertices
            if v not in h
            and graph.is_regular(v)
            and all(s in h for s in graph.sources_into(v))
        ]
        if not saturated:
            return HSSet(frozenset(h))
        h.update(saturated)
        stack.extend(saturated)


def generator(graph: Graph, v: str) -> HSSet:
    """The singly generated element <v>."""
    return hs_closure(graph, (v,))


@dataclass(frozen=True, eq=False)
class IdealLattice:
    """All hereditary saturated subsets of a graph, ordered by inclusion."""

    graph: Graph
    elements: tuple[HSSet, ...]

    @cached_property
    def index(self) -> dict[HSSet, int]:
        return {h: i for i, h in enumerate(self.elements)}

    @property
    def bottom(self) -> HSSet:
        return self.elements[0]

    @property
    def top(self) -> HSSet:
        return self.elements[-1]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, h: HSSet) -> bool:
        return h in self.index

    def leq(self, a: HSSet, b: HSSet) -> bool:
        return a.members <= b.members

    def join(self, a: HSSet, b: HSSet) -> HSSet:
        return hs_closure(self.graph, a.members | b.members)

    def meet(self, a: HSSet, b: HSSet) -> HSSet:
        return HSSet(a.members & b.members)

    @cached_property
    def covers(self) -> tuple[tuple[HSSet, HSSet], ...]:
        """Hasse diagram edges (a, b) with a < b and nothing in between."""
        pairs = []
        for a in self.elements:
            above = [b for b in self.elements if a < b]
            for b in above:
                if not any(a < c < b for c in above):
                    pairs.append((a, b))
        return tuple(pairs)

    @cached_property
    def primes(self) -> tuple[HSSet, ...]:
        return tuple(h for h in self.elements if is_lattice_prime(self, h))

    def height(self, h: HSSet) -> int:
        """Length of the longest chain from bottom to h."""
        return self._heights[h]

    @cached_property
    def _heights(self) -> dict[HSSet, int]:
        heights: dict[HSSet, int] = {}
        for h in self.elements:
            below = [a for a, b in self.covers if b == h]
            heights[h] = 1 + max((heights[a] for a in below), default=-1)
        return heights


def enumerate_lattice(graph: Graph, bound: int | None = None) -> IdealLattice:
    """Enumerate every hereditary saturated subset.

    Breadth-first search from the empty set, adding one vertex at a time and
    closing; every element is reached because it is the closure of a chain of
    single-vertex extensions.

    Raises:
        TooLarge: if the graph has more than ``bound`` vertices
    """
    bound = get_settings().max_lattice_vertices if bound is None else bound
    if len(graph.vertices) > bound:
        raise TooLarge(
            f"Graph has {len(graph.vertices)} vertices; bound is {bound}",
            vertices=len(graph.vertices),
            bound=bound,
        )
    return _enumerate(graph)


@lru_cache(maxsize=256)
def _enumerate(graph: Graph) -> IdealLattice:
    start = hs_closure(graph, ())
    seen = {start}
    queue = deque([start])
    while queue:
        h = queue.popleft()
        for v in graph.vertices:
            if v in h.members:
                continue
            nxt = hs_closure(graph, h.members | {v})
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)

    lattice = IdealLattice(graph, tuple(sorted(seen, key=lambda h: h.sort_key)))
    record_lattice(len(lattice))
    logger.debug(
        "lattice_enumerated",
        extra={"vertices": len(graph.vertices), "size": len(lattice)},
    )
    return lattice


def is_lattice_prime(lattice: IdealLattice, h: HSSet) -> bool:
    """H != top and H1 meet H2 <= H implies H1 <= H or H2 <= H."""
    if h == lattice.top:
        return False
    outside = [a for a in lattice.elements if not a.members <= h.members]
    for i, a in enumerate(outside):
        for b in outside[i:]:
            if (a.members & b.members) <= h.members:
                return False
    return True


def join_irreducibles(lattice: IdealLattice) -> list[HSSet]:
    """Elements other than bottom that are not the join of strictly smaller ones."""
    result = []
    for h in lattice.elements:
        if h == lattice.bottom:
            continue
        smaller = set()
        for a in lattice.elements:
            if a < h:
                smaller |= a.members
        if hs_closure(lattice.graph, smaller) != h:
            result.append(h)
    return result


def satisfies_mt(graph: Graph, members: Iterable[str]) -> bool:
    """Check the three maximal tail conditions for M."""
    m = graph.require(members)
    if not m:
        return False
    # MT1: M is closed under following edges forwards
    if any(graph.src[e] in m and graph.rng[e] not in m for e in graph.edges):
        return False
    # MT2: regular vertices of M receive an edge from M
    for v in m:
        if graph.is_regular(v) and not any(s in m for s in graph.sources_into(v)):
            return False
    # MT3: any two vertices of M have a common ancestor in M
    reach = {y: _reach_within(graph, y, m) for y in m}
    for v in m:
        for w in m:
            if not any(v in reach[y] and w in reach[y] for y in m):
                return False
    return True


def _reach_within(graph: Graph, start: str, members: frozenset[str]) -> set[str]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for e in graph.edges_from(v):
            r = graph.rng[e]
            if r in members and r not in seen:
                seen.add(r)
                stack.append(r)
    return seen


def minimal_cover(graph: Graph, h: HSSet) -> HSSet:
    """Intersection of all closures <H u {v}> for v outside H.

    For a prime H this is the unique minimal lattice element strictly above H.
    """
    outside = [v for v in graph.vertices if v not in h.members]
    check(bool(outside), "top has no cover", element=h.format())
    members = None
    for v in outside:
        closed = hs_closure(graph, h.members | {v}).members
        members = closed if members is None else members & closed
    return HSSet(frozenset(members))


def classify_tail(graph: Graph, members: Iterable[str]) -> MaximalTail:
    """Classify a maximal tail as AF, purely infinite simple or circle.

    The gauge-simple subquotient attached to M lives on D = H2 \\ Omega(M),
    where H2 is the minimal element above Omega(M). G|_D has no cycle (AF),
    exactly one simple cycle without entry (circle), or at least two (purely
    infinite simple).

    Raises:
        NotATail: if M violates a maximal tail condition
    """
    m = graph.require(members)
    if not satisfies_mt(graph, m):
        raise NotATail(
            "Vertex set is not a maximal tail",
            tail="{" + ",".join(sorted(m)) + "}",
        )

    omega = HSSet(graph.vertex_set - m)
    check(
        is_hereditary_saturated(graph, omega.members),
        "complement of a tail is not hereditary saturated",
        tail=sorted(m),
    )
    successor = minimal_cover(graph, omega)
    check(omega < successor, "no element strictly above complement", tail=sorted(m))

    layer = successor.members - omega.members
    cycles = simple_cycles_within(graph, layer, stop_after=2)

    if not cycles:
        kind, tau = TailKind.AF, None
    elif len(cycles) == 1:
        kind, tau = TailKind.CIRCLE, cycles[0]
        check(not tau.has_entry, "circle cycle has an entry in its layer", cycle=tau.edges)
        on_cycle = set(tau.vertices)
        own = set(tau.edges)
        check(
            not any(
                graph.rng[f] in on_cycle and graph.src[f] in m and f not in own
                for f in graph.edges
            ),
            "circle cycle has an entry in the tail",
            cycle=tau.edges,
        )
    else:
        kind, tau = TailKind.PURELY_INFINITE_SIMPLE, None

    return MaximalTail(
        members=m,
        kind=kind,
        complement=omega,
        successor=successor,
        tau_cycle=tau,
    )


def maximal_tails(graph: Graph, bound: int | None = None) -> list[MaximalTail]:
    """All maximal tails, as complements of the proper prime lattice elements."""
    lattice = enumerate_lattice(graph, bound)
    tails = []
    for h in lattice.primes:
        m = graph.vertex_set - h.members
        check(satisfies_mt(graph, m), "complement of prime fails tail conditions", prime=h.format())
        tails.append(classify_tail(graph, m))
    return sorted(tails, key=lambda t: (len(t.members), sorted(t.members)))


def tau_successor(graph: Graph, tail: MaximalTail) -> HSSet:
    """H2 = <Omega(M) u {v}> for the least vertex v on the circle cycle.

    Raises:
        NotCircle: if the tail is not of circle kind
    """
    if tail.kind is not TailKind.CIRCLE or tail.tau_cycle is None:
        raise NotCircle(tail=tail.format(), kind=tail.kind.value)
    v = tail.tau_cycle.base_vertex
    h2 = hs_closure(graph, tail.complement.members | {v})
    check(
        h2 == minimal_cover(graph, tail.complement),
        "successor is not the unique minimal cover",
        tail=tail.format(),
    )
    return h2


def is_purely_infinite_proxy(graph: Graph, bound: int | None = None) -> bool:
    """Every maximal tail is of purely infinite simple kind."""
    return all(
        t.kind is TailKind.PURELY_INFINITE_SIMPLE for t in maximal_tails(graph, bound)
    )


def extend_order_iso(
    lattice: IdealLattice,
    other: IdealLattice,
    psi: Mapping[HSSet, HSSet],
) -> dict[HSSet, HSSet]:
    """Extend psi by U -> union of psi(W) over W <= U, and check it agrees.

    Raises:
        NotMonotone: if psi is not an order isomorphism between the lattices
    """
    if set(psi) != set(lattice.elements) or set(psi.values()) != set(other.elements):
        raise NotMonotone("Map is not a bijection between the lattices")
    if len(set(psi.values())) != len(psi):
        raise NotMonotone("Map is not injective")
    for a in lattice.elements:
        for b in lattice.elements:
            if (a <= b) != (psi[a] <= psi[b]):
                raise NotMonotone(
                    "Map does not preserve and reflect the order",
                    first=a.format(),
                    second=b.format(),
                )

    extended = {}
    for u in lattice.elements:
        union: frozenset[str] = frozenset()
        for w in lattice.elements:
            if w <= u:
                union |= psi[w].members
        extended[u] = HSSet(union)
        check(extended[u] == psi[u], "extension differs from the map", element=u.format())
    return extended
