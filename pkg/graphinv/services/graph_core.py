"""Directed multigraphs with source/range maps, regularity, reachability and cycles.

Conventions: an edge ``e`` has source ``src[e]`` and range ``rng[e]``. A path
``e1 e2 ... ek`` satisfies ``src[e_{i+1}] == rng[e_i]``. ``E^v`` denotes the
edges with range ``v``; a vertex is regular when ``E^v`` is nonempty.
"""

import itertools
import logging
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from graphinv.config import get_settings
from graphinv.errors import CapExceeded, DuplicateId, ParseError, UnknownVertex

logger = logging.getLogger(__name__)

IDENTIFIER = re.compile(r"^[A-Za-z0-9_]+$")


@dataclass(frozen=True, eq=False)
class Graph:
    """Finite directed multigraph with named vertices and edges.

    Instances are immutable; vertices and edges are stored in lexicographic
    order so every derived ordering is deterministic.
    """

    vertices: tuple[str, ...]
    edges: tuple[str, ...]
    src: Mapping[str, str]
    rng: Mapping[str, str]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    @cached_property
    def _key(self) -> tuple:
        return (
            self.vertices,
            tuple((e, self.src[e], self.rng[e]) for e in self.edges),
        )

    @cached_property
    def _edges_into(self) -> dict[str, tuple[str, ...]]:
        into: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            into[self.rng[e]].append(e)
        return {v: tuple(es) for v, es in into.items()}

    @cached_property
    def _edges_from(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[self.src[e]].append(e)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    def edges_into(self, v: str) -> tuple[str, ...]:
        """E^v: edges with range v, in lexicographic order."""
        return self._edges_into[v]

    def edges_from(self, v: str) -> tuple[str, ...]:
        return self._edges_from[v]

    def sources_into(self, v: str) -> tuple[str, ...]:
        """Sources of the edges in E^v, with multiplicity."""
        return tuple(self.src[e] for e in self._edges_into[v])

    def is_regular(self, v: str) -> bool:
        return bool(self._edges_into[v])

    def require(self, vertices: Iterable[str]) -> frozenset[str]:
        """Return vertices as a frozenset, raising UnknownVertex for strangers."""
        members = frozenset(vertices)
        unknown = sorted(members - self.vertex_set)
        if unknown:
            raise UnknownVertex(f"Unknown vertex '{unknown[0]}'", vertex=unknown[0])
        return members

    @cached_property
    def nx_graph(self) -> nx.MultiDiGraph:
        """networkx view; edge keys are the edge identifiers."""
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices)
        for e in self.edges:
            g.add_edge(self.src[e], self.rng[e], key=e)
        return g

    def restrict(self, members: Iterable[str]) -> "Graph":
        """Full subgraph G|_M on the given vertices."""
        keep = self.require(members)
        edges = [e for e in self.edges if self.src[e] in keep and self.rng[e] in keep]
        return Graph(
            vertices=tuple(sorted(keep)),
            edges=tuple(edges),
            src={e: self.src[e] for e in edges},
            rng={e: self.rng[e] for e in edges},
        )

    def reversed(self) -> "Graph":
        return Graph(self.vertices, self.edges, dict(self.rng), dict(self.src))

    def relabel(
        self,
        vertex_map: Mapping[str, str],
        edge_map: Mapping[str, str] | None = None,
    ) -> "Graph":
        """Rename vertices (and optionally edges); maps must be injective."""
        edge_map = edge_map or {e: e for e in self.edges}
        return validate(
            {
                "vertices": [vertex_map[v] for v in self.vertices],
                "edges": [
                    (edge_map[e], vertex_map[self.src[e]], vertex_map[self.rng[e]])
                    for e in self.edges
                ],
            }
        )

    def to_description(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [(e, self.src[e], self.rng[e]) for e in self.edges],
        }

    @property
    def is_empty(self) -> bool:
        return not self.vertices


@dataclass(frozen=True)
class Cycle:
    """Closed path e1 ... ek in canonical rotation (least edge first)."""

    edges: tuple[str, ...]
    vertices: tuple[str, ...]
    has_entry: bool = field(default=False, compare=False)

    @property
    def simple(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    @property
    def base_vertex(self) -> str:
        """Lexicographically least vertex on the cycle."""
        return min(self.vertices)

    def __len__(self) -> int:
        return len(self.edges)


def validate(description: Mapping | Graph) -> Graph:
    """Build a Graph from {"vertices": [...], "edges": [(id, src, rng), ...]}.

    The empty graph is valid. Raises DuplicateId or UnknownVertex for
    malformed input.
    """
    if isinstance(description, Graph):
        description = description.to_description()

    vertices = [str(v) for v in description.get("vertices", [])]
    seen: set[str] = set()
    for v in vertices:
        if not IDENTIFIER.match(v):
            raise ParseError(f"Invalid vertex identifier '{v}'", identifier=v)
        if v in seen:
            raise DuplicateId(f"Vertex '{v}' declared twice", identifier=v)
        seen.add(v)

    src: dict[str, str] = {}
    rng: dict[str, str] = {}
    for item in description.get("edges", []):
        e, s, r = (str(x) for x in item)
        if not IDENTIFIER.match(e):
            raise ParseError(f"Invalid edge identifier '{e}'", identifier=e)
        if e in src:
            raise DuplicateId(f"Edge '{e}' declared twice", identifier=e)
        for endpoint in (s, r):
            if endpoint not in seen:
                raise UnknownVertex(
                    f"Edge '{e}' references undeclared vertex '{endpoint}'",
                    edge=e,
                    vertex=endpoint,
                )
        src[e] = s
        rng[e] = r

    return Graph(
        vertices=tuple(sorted(vertices)),
        edges=tuple(sorted(src)),
        src=src,
        rng=rng,
    )


def regular_vertices(graph: Graph) -> frozenset[str]:
    """V_reg: vertices receiving at least one edge."""
    return frozenset(v for v in graph.vertices if graph.is_regular(v))


def reaches(graph: Graph, w: str, v: str) -> bool:
    """True iff there is a (possibly empty) path from w to v."""
    graph.require((w, v))
    if w == v:
        return True
    return nx.has_path(graph.nx_graph, w, v)


def reachability_closure(graph: Graph) -> dict[str, frozenset[str]]:
    """Map each vertex to the set of vertices it reaches (itself included)."""
    g = graph.nx_graph
    return {v: frozenset(nx.descendants(g, v)) | {v} for v in graph.vertices}


def is_acyclic(graph: Graph) -> bool:
    return nx.is_directed_acyclic_graph(graph.nx_graph)


def _canonical_rotation(edges: list[str], graph: Graph) -> tuple[tuple[str, ...], tuple[str, ...]]:
    start = edges.index(min(edges))
    rotated = tuple(edges[start:] + edges[:start])
    return rotated, tuple(graph.src[e] for e in rotated)


def _expand_vertex_cycle(sub: Graph, cycle_vertices: list[str]) -> Iterable[list[str]]:
    """All edge cycles running through the given vertex cycle."""
    k = len(cycle_vertices)
    choices = []
    for i, a in enumerate(cycle_vertices):
        b = cycle_vertices[(i + 1) % k]
        choices.append([e for e in sub.edges_from(a) if sub.rng[e] == b])
    for picked in itertools.product(*choices):
        yield list(picked)


def simple_cycles_within(
    graph: Graph,
    members: Iterable[str] | None = None,
    cap: int | None = None,
    stop_after: int | None = None,
) -> list[Cycle]:
    """Simple cycles of the full subgraph G|_M, up to rotation.

    Cycles are returned in canonical rotation (least edge identifier first)
    and sorted by their edge tuples. ``has_entry`` is set when some edge of
    G|_M ends on the cycle without belonging to it.

    Args:
        graph: The ambient graph
        members: M; defaults to all vertices
        cap: Overflow limit (default: settings.cycle_cap); exceeding raises CapExceeded
        stop_after: Stop enumerating once this many cycles were found
    """
    cap = get_settings().cycle_cap if cap is None else cap
    sub = graph.restrict(graph.vertices if members is None else members)

    # parallel edges are expanded below, so enumerate on the simple digraph
    skeleton = nx.DiGraph()
    skeleton.add_nodes_from(sub.vertices)
    skeleton.add_edges_from((sub.src[e], sub.rng[e]) for e in sub.edges)

    found: dict[tuple[str, ...], tuple[str, ...]] = {}
    for vertex_cycle in nx.simple_cycles(skeleton):
        for edge_cycle in _expand_vertex_cycle(sub, vertex_cycle):
            rotated, verts = _canonical_rotation(edge_cycle, sub)
            found[rotated] = verts
            if len(found) > cap:
                raise CapExceeded(
                    f"More than {cap} simple cycles", cap=cap, vertices=len(sub.vertices)
                )
            if stop_after is not None and len(found) >= stop_after:
                break
        if stop_after is not None and len(found) >= stop_after:
            break

    cycles = []
    for edges in sorted(found):
        on_cycle = set(found[edges])
        own = set(edges)
        entry = any(
            sub.rng[f] in on_cycle and f not in own for f in sub.edges
        )
        cycles.append(Cycle(edges=edges, vertices=found[edges], has_entry=entry))
    return cycles


def count_simple_cycles(graph: Graph, members: Iterable[str] | None = None, limit: int = 2) -> int:
    """Number of simple cycles of G|_M, saturating at ``limit``."""
    return len(simple_cycles_within(graph, members, stop_after=limit))
