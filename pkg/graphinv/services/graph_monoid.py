"""The projection monoid of a graph C*-algebra, via N[V] representatives.

Two elements c1, c2 of N[V] name the same projection class iff their
hereditary saturated supports agree (= W) and their classes in K0(W) agree.
A rewriting oracle over the moves delta_v <-> sum of delta_{s(e)}, e in E^v,
cross-checks that decision.
"""

import logging
import re
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum

from graphinv.config import get_settings
from graphinv.errors import MissingImage, ParseError
from graphinv.services.graph_core import Graph
from graphinv.services.ideal_lattice import HSSet, enumerate_lattice, hs_closure
from graphinv.services.ktheory import Answer, ConeAnswer, k_groups, positive_cone_member

logger = logging.getLogger(__name__)

TERM = re.compile(r"^\s*([A-Za-z0-9_]+)\s*(?::\s*(\d+))?\s*$")


@dataclass(frozen=True)
class MonoidElement:
    """Finitely supported N-combination of vertices (zero coefficients dropped)."""

    coeffs: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[str, int]) -> "MonoidElement":
        for v, n in mapping.items():
            if n < 0:
                raise ParseError(f"Negative coefficient for '{v}'", vertex=v)
        return cls(tuple(sorted((v, n) for v, n in mapping.items() if n)))

    @classmethod
    def delta(cls, v: str, n: int = 1) -> "MonoidElement":
        return cls.of({v: n})

    @classmethod
    def parse(cls, literal: str) -> "MonoidElement":
        """Parse ``v1:2,v3:1``; a bare vertex means coefficient 1, ``0`` or empty is zero."""
        literal = literal.strip()
        if literal in ("", "0"):
            return cls()
        counts: dict[str, int] = {}
        for part in literal.split(","):
            match = TERM.match(part)
            if not match:
                raise ParseError(f"Malformed monoid term '{part.strip()}'", term=part.strip())
            v, n = match.group(1), int(match.group(2) or 1)
            counts[v] = counts.get(v, 0) + n
        return cls.of(counts)

    def as_dict(self) -> dict[str, int]:
        return dict(self.coeffs)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(v for v, _ in self.coeffs)

    def __add__(self, other: "MonoidElement") -> "MonoidElement":
        total = self.as_dict()
        for v, n in other.coeffs:
            total[v] = total.get(v, 0) + n
        return MonoidElement.of(total)

    def scale(self, n: int) -> "MonoidElement":
        return MonoidElement.of({v: n * c for v, c in self.coeffs})

    def is_zero(self) -> bool:
        return not self.coeffs

    def format(self) -> str:
        return ",".join(f"{v}:{n}" for v, n in self.coeffs) or "0"

    def __str__(self) -> str:
        return self.format()


class OracleResult(str, Enum):
    EQUAL = "equal"
    DISTINCT = "distinct"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class OracleAnswer:
    result: OracleResult
    depth: int
    states: int


@dataclass(frozen=True)
class MonoidHom:
    """Assignment of monoid elements of G' to the vertices of G."""

    images: dict[str, MonoidElement]
    verified: bool
    failures: tuple[str, ...] = ()
    psi: dict[HSSet, HSSet] = field(default_factory=dict)


def supp_ideal(graph: Graph, c: MonoidElement) -> HSSet:
    """Hereditary saturated closure of the support of c."""
    return hs_closure(graph, c.support)


def _vector(graph: Graph, c: MonoidElement) -> dict[str, int]:
    graph.require(c.support)
    return c.as_dict()


def equal_in_P(graph: Graph, c1: MonoidElement, c2: MonoidElement) -> bool:
    """Equality of projection classes: same support, same K0 class there."""
    w1 = supp_ideal(graph, c1)
    w2 = supp_ideal(graph, c2)
    if w1 != w2:
        return False
    if not w1.members:
        return True
    data = k_groups(graph, w1)
    return data.pi(_vector(graph, c1)) == data.pi(_vector(graph, c2))


def prec(graph: Graph, c1: MonoidElement, c2: MonoidElement) -> bool:
    """c1 is dominated by a multiple of c2: supp(c1) <= supp(c2)."""
    return supp_ideal(graph, c1).members <= supp_ideal(graph, c2).members


def leq_in_P(
    graph: Graph,
    c1: MonoidElement,
    c2: MonoidElement,
    bound: int | None = None,
) -> ConeAnswer:
    """Decide c1 <= c2 in the monoid: some c' in N[V] with c1 + c' equal to c2.

    A candidate c' must be supported in W = supp(c2) and have K0(W) class
    [c2] - [c1]. The cone decision gives a witness or an obstruction; when the
    witness found does not reach the full support, a bounded search over
    coefficients up to ``bound`` follows.
    """
    bound = get_settings().leq_search_bound if bound is None else bound
    if equal_in_P(graph, c1, c2):
        return ConeAnswer(Answer.YES, witness={})
    if not prec(graph, c1, c2):
        return ConeAnswer(Answer.NO, reason="support of c1 is not contained in support of c2")

    w = supp_ideal(graph, c2)
    difference = c2.as_dict()
    for v, n in c1.coeffs:
        difference[v] = difference.get(v, 0) - n
    cone = positive_cone_member(graph, w, difference)
    if cone.status is Answer.NO:
        return ConeAnswer(Answer.NO, reason=f"K0 obstruction: {cone.reason}")
    if cone.status is Answer.YES:
        candidate = MonoidElement.of(cone.witness or {})
        if equal_in_P(graph, c1 + candidate, c2):
            return ConeAnswer(Answer.YES, witness=candidate.as_dict())

    vertices = sorted(w.members)
    for counts in _box(len(vertices), bound):
        candidate = MonoidElement.of(dict(zip(vertices, counts)))
        if equal_in_P(graph, c1 + candidate, c2):
            return ConeAnswer(Answer.YES, witness=candidate.as_dict())
    return ConeAnswer(Answer.UNKNOWN, bound=bound, reason="no witness within the search bound")


def _box(n: int, bound: int) -> Iterable[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for head in range(bound + 1):
        for tail in _box(n - 1, bound):
            yield (head,) + tail


def congruence_oracle(
    graph: Graph,
    c1: MonoidElement,
    c2: MonoidElement,
    depth: int = 10,
    cap: int | None = None,
) -> OracleAnswer:
    """Bidirectional breadth-first search over the rewriting congruence.

    Returns equal when the two orbits meet within ``depth`` moves in total,
    distinct when either orbit was exhausted without meeting the other, and
    inconclusive otherwise (depth or state cap reached).
    """
    cap = get_settings().monoid_bfs_cap if cap is None else cap
    graph.require(c1.support | c2.support)
    order = graph.vertices
    regular = [v for v in order if graph.is_regular(v)]
    position = {v: i for i, v in enumerate(order)}
    moves = []
    for v in regular:
        produced = [0] * len(order)
        for s in graph.sources_into(v):
            produced[position[s]] += 1
        consumed = [0] * len(order)
        consumed[position[v]] = 1
        moves.append((tuple(consumed), tuple(produced)))

    def neighbours(state: tuple[int, ...]):
        for a, b in moves:
            for lhs, rhs in ((a, b), (b, a)):
                if all(x >= y for x, y in zip(state, lhs)):
                    yield tuple(x - y + z for x, y, z in zip(state, lhs, rhs))

    def encode(c: MonoidElement) -> tuple[int, ...]:
        state = [0] * len(order)
        for v, n in c.coeffs:
            state[position[v]] = n
        return tuple(state)

    start, goal = encode(c1), encode(c2)
    if start == goal:
        return OracleAnswer(OracleResult.EQUAL, 0, 1)

    sides = [{start: 0}, {goal: 0}]
    frontiers = [deque([start]), deque([goal])]
    exhausted = [False, False]
    steps = 0
    while steps < depth and not any(exhausted):
        side = steps % 2
        seen, other = sides[side], sides[1 - side]
        next_frontier: deque = deque()
        for state in frontiers[side]:
            for nxt in neighbours(state):
                if nxt in seen:
                    continue
                seen[nxt] = seen[state] + 1
                if nxt in other:
                    return OracleAnswer(
                        OracleResult.EQUAL, seen[nxt] + other[nxt], len(sides[0]) + len(sides[1])
                    )
                if len(sides[0]) + len(sides[1]) > cap:
                    return OracleAnswer(OracleResult.INCONCLUSIVE, steps, cap)
                next_frontier.append(nxt)
        frontiers[side] = next_frontier
        exhausted[side] = not next_frontier
        steps += 1

    states = len(sides[0]) + len(sides[1])
    if any(exhausted):
        return OracleAnswer(OracleResult.DISTINCT, steps, states)
    return OracleAnswer(OracleResult.INCONCLUSIVE, steps, states)


def verify_monoid_hom(
    graph: Graph,
    target: Graph,
    images: Mapping[str, MonoidElement],
) -> MonoidHom:
    """Check that vertex images respect every relation delta_v = sum over E^v.

    Also reports the induced map psi(W) = supp(sum of images over W) on the
    lattice of G.

    Raises:
        MissingImage: if some vertex of G has no image
    """
    missing = [v for v in graph.vertices if v not in images]
    if missing:
        raise MissingImage(f"No image for vertex '{missing[0]}'", vertex=missing[0])
    for c in images.values():
        target.require(c.support)

    failures = []
    for v in graph.vertices:
        if not graph.is_regular(v):
            continue
        total = MonoidElement()
        for s in graph.sources_into(v):
            total = total + images[s]
        if not equal_in_P(target, images[v], total):
            failures.append(v)

    psi = {}
    for w in enumerate_lattice(graph):
        total = MonoidElement()
        for v in sorted(w.members):
            total = total + images[v]
        psi[w] = supp_ideal(target, total)

    verified = not failures
    logger.debug(
        "monoid_hom_checked",
        extra={"verified": verified, "failures": failures},
    )
    return MonoidHom(
        images=dict(images),
        verified=verified,
        failures=tuple(failures),
        psi=psi,
    )
