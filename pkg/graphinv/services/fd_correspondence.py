"""Proper correspondences from C*(G) into finite-dimensional targets.

The target is a direct sum of matrix blocks M_{n_1} + ... + M_{n_k}. A
correspondence is a family of multiplicity spaces H_v = C^{d_v} per block and,
for each regular v, a unitary U_v from the direct sum of H_{s(e)} over the
edges e into v (ordered by edge identifier) onto H_v. The partial isometry
T_e is the restriction of U_v to the e-summand.
"""

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from graphinv.config import get_settings
from graphinv.errors import DimensionEquationViolated, DimsMismatch, HasCycle, ParseError, check
from graphinv.services.graph_core import Graph, is_acyclic, validate
from graphinv.services.graph_monoid import MonoidElement, MonoidHom, verify_monoid_hom

logger = logging.getLogger(__name__)

Blocks = tuple[np.ndarray, ...]


@dataclass(frozen=True)
class FDTarget:
    block_sizes: tuple[int, ...]

    def __post_init__(self):
        check(all(n >= 1 for n in self.block_sizes), "block sizes must be positive")

    @property
    def blocks(self) -> int:
        return len(self.block_sizes)

    def block_vertex(self, i: int) -> str:
        return f"block{i}"

    def as_graph(self) -> Graph:
        """Isolated vertices, one per block; its projection monoid is N^k."""
        return validate({"vertices": [self.block_vertex(i) for i in range(self.blocks)], "edges": []})


@dataclass(frozen=True, eq=False)
class CorrespondenceFamily:
    target: FDTarget
    dims: dict[str, tuple[int, ...]]
    unitaries: dict[str, Blocks]
    method: str = "permutation"
    seed: int | None = None


@dataclass(frozen=True)
class CKReport:
    """Operator-norm residuals of the Cuntz-Krieger relations."""

    edges: dict[str, float] = field(default_factory=dict)
    vertices: dict[str, float] = field(default_factory=dict)
    unitarity: dict[str, float] = field(default_factory=dict)

    @property
    def residual(self) -> float:
        values = [*self.edges.values(), *self.vertices.values(), *self.unitarity.values()]
        return max(values, default=0.0)

    def holds(self, tolerance: float | None = None) -> bool:
        tolerance = get_settings().ck_tolerance if tolerance is None else tolerance
        return self.residual <= tolerance


def _normalise_dims(
    graph: Graph,
    target: FDTarget,
    dims: Mapping[str, int | Sequence[int]],
) -> dict[str, tuple[int, ...]]:
    graph.require(dims)
    out = {}
    for v in graph.vertices:
        d = dims.get(v, (0,) * target.blocks)
        if isinstance(d, int):
            d = (d,)
        d = tuple(int(x) for x in d)
        if len(d) != target.blocks:
            raise ParseError(
                f"Rank vector of '{v}' has {len(d)} entries; target has {target.blocks} blocks",
                vertex=v,
            )
        if any(x < 0 for x in d):
            raise ParseError(f"Rank vector of '{v}' has a negative entry", vertex=v)
        out[v] = d
    return out


def _incoming(graph: Graph, v: str) -> list[str]:
    return sorted(graph.edges_into(v))


def _offsets(graph: Graph, dims: Mapping[str, tuple[int, ...]], v: str, i: int) -> dict[str, slice]:
    """Column ranges of each e-summand inside the domain of U_v in block i."""
    slices = {}
    start = 0
    for e in _incoming(graph, v):
        width = dims[graph.src[e]][i]
        slices[e] = slice(start, start + width)
        start += width
    return slices


def check_dimension_equation(
    graph: Graph,
    target: FDTarget,
    dims: Mapping[str, int | Sequence[int]],
) -> dict[str, tuple[int, ...]]:
    """Normalised rank vectors satisfying d_v = sum of d_{s(e)} over e into v.

    Raises:
        DimensionEquationViolated: naming the first offending vertex and block
    """
    normalised = _normalise_dims(graph, target, dims)
    for v in graph.vertices:
        if not graph.is_regular(v):
            continue
        for i in range(target.blocks):
            total = sum(normalised[s][i] for s in graph.sources_into(v))
            if total != normalised[v][i]:
                raise DimensionEquationViolated(
                    f"Dimension of '{v}' in block {i} is {normalised[v][i]}, incoming sum is {total}",
                    vertex=v,
                    block=i,
                    expected=total,
                    got=normalised[v][i],
                )
    return normalised


def dimension_hom(
    graph: Graph,
    target: FDTarget,
    dims: Mapping[str, int | Sequence[int]],
) -> MonoidHom:
    """The rank-vector assignment as a monoid map into the N^k model."""
    normalised = _normalise_dims(graph, target, dims)
    images = {
        v: MonoidElement.of({target.block_vertex(i): n for i, n in enumerate(d)})
        for v, d in normalised.items()
    }
    return verify_monoid_hom(graph, target.as_graph(), images)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed n x n unitary from the QR decomposition of a Gaussian matrix."""
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    phases = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return q * phases


def lift_monoid_hom_fd(
    graph: Graph,
    target: FDTarget,
    dims: Mapping[str, int | Sequence[int]],
    method: str = "permutation",
    seed: int | None = None,
) -> CorrespondenceFamily:
    """Build a correspondence with the given dimensions.

    ``permutation`` uses identity matrices (summands stacked in edge order);
    ``haar`` draws each U_v from a seeded Haar measure.

    Raises:
        DimensionEquationViolated: if the rank vectors do not satisfy the
            dimension equation at some regular vertex and block
    """
    check(method in ("permutation", "haar"), "unknown construction method", method=method)
    normalised = check_dimension_equation(graph, target, dims)
    if method == "haar" and seed is None:
        seed = get_settings().fd_seed
    rng = np.random.default_rng(seed)

    unitaries: dict[str, Blocks] = {}
    for v in graph.vertices:
        if not graph.is_regular(v):
            continue
        blocks = []
        for i in range(target.blocks):
            n = normalised[v][i]
            blocks.append(haar_unitary(n, rng) if method == "haar" else np.eye(n, dtype=complex))
        unitaries[v] = tuple(blocks)

    family = CorrespondenceFamily(target, normalised, unitaries, method, seed if method == "haar" else None)
    report = verify_ck(family, graph)
    check(report.holds(), "constructed family violates the relations", residual=report.residual)
    logger.debug(
        "fd_family_built",
        extra={"method": method, "seed": family.seed, "residual": report.residual},
    )
    return family


def _norm(x: np.ndarray) -> float:
    if x.size == 0:
        return 0.0
    return float(np.linalg.norm(x, 2))


def verify_ck(family: CorrespondenceFamily, graph: Graph) -> CKReport:
    """Residuals of T_e* T_e = P_{s(e)}, sum of T_e T_e* = P_v, and U_v unitary."""
    edges: dict[str, float] = {}
    vertices: dict[str, float] = {}
    unitarity: dict[str, float] = {}
    for v, blocks in family.unitaries.items():
        for i, u in enumerate(blocks):
            d = family.dims[v][i]
            unitarity[v] = max(unitarity.get(v, 0.0), _norm(u.conj().T @ u - np.eye(d)))
            total = np.zeros((d, d), dtype=complex)
            for e, cols in _offsets(graph, family.dims, v, i).items():
                t = u[:, cols]
                width = cols.stop - cols.start
                edges[e] = max(edges.get(e, 0.0), _norm(t.conj().T @ t - np.eye(width)))
                total += t @ t.conj().T
            vertices[v] = max(vertices.get(v, 0.0), _norm(total - np.eye(d)))
    return CKReport(edges, vertices, unitarity)


def _require_same_dims(f1: CorrespondenceFamily, f2: CorrespondenceFamily) -> None:
    if f1.dims != f2.dims or f1.target != f2.target:
        mismatched = sorted(v for v in set(f1.dims) | set(f2.dims) if f1.dims.get(v) != f2.dims.get(v))
        raise DimsMismatch(
            "Families have different dimensions",
            vertex=mismatched[0] if mismatched else None,
        )


def unitary_difference(f1: CorrespondenceFamily, f2: CorrespondenceFamily) -> dict[str, Blocks]:
    """Upsilon_v = U'_v U_v* for every regular v, with U'_v = Upsilon_v U_v checked.

    Raises:
        DimsMismatch: if the families have different dimensions
    """
    _require_same_dims(f1, f2)
    tolerance = get_settings().unitarity_tolerance
    out = {}
    for v, blocks in f1.unitaries.items():
        diffs = []
        for u, u2 in zip(blocks, f2.unitaries[v]):
            upsilon = u2 @ u.conj().T
            check(_norm(upsilon @ u - u2) <= tolerance, "difference does not reconstruct", vertex=v)
            diffs.append(upsilon)
        out[v] = tuple(diffs)
    return out


def conjugate_family(
    family: CorrespondenceFamily,
    graph: Graph,
    w: Mapping[str, Blocks],
) -> CorrespondenceFamily:
    """U''_v = W_v U_v (direct sum of W_{s(e)})*; missing W are identities."""

    def w_of(v: str, i: int) -> np.ndarray:
        blocks = w.get(v)
        return np.eye(family.dims[v][i], dtype=complex) if blocks is None else blocks[i]

    unitaries = {}
    for v, blocks in family.unitaries.items():
        new = []
        for i, u in enumerate(blocks):
            d = family.dims[v][i]
            summed = np.zeros((d, d), dtype=complex)
            for e, cols in _offsets(graph, family.dims, v, i).items():
                summed[cols, cols] = w_of(graph.src[e], i)
            new.append(w_of(v, i) @ u @ summed.conj().T)
        unitaries[v] = tuple(new)
    return CorrespondenceFamily(family.target, dict(family.dims), unitaries, family.method, family.seed)


def _topological_order(graph: Graph) -> list[str]:
    return list(nx.lexicographical_topological_sort(graph.nx_graph))


def align_af(
    graph: Graph,
    f1: CorrespondenceFamily,
    f2: CorrespondenceFamily,
    finite: Iterable[str],
) -> dict[str, Blocks]:
    """Unitaries W with conjugate_family(f2, W) agreeing with f1 on ``finite``.

    Vertices are visited in topological order, so the W at the sources of
    edges into v are fixed before W_v = U_v (sum of W_{s(e)}) U'_v*.

    Raises:
        HasCycle: if the graph has a cycle
        DimsMismatch: if the families have different dimensions
    """
    if not is_acyclic(graph):
        raise HasCycle("Alignment needs an acyclic graph")
    _require_same_dims(f1, f2)
    finite = graph.require(finite)

    w: dict[str, Blocks] = {}
    for v in _topological_order(graph):
        if v not in finite or v not in f1.unitaries:
            continue
        blocks = []
        for i, (u, u2) in enumerate(zip(f1.unitaries[v], f2.unitaries[v])):
            d = f1.dims[v][i]
            summed = np.eye(d, dtype=complex)
            for e, cols in _offsets(graph, f1.dims, v, i).items():
                source = w.get(graph.src[e])
                if source is not None:
                    summed[cols, cols] = source[i]
            blocks.append(u @ summed @ u2.conj().T)
        w[v] = tuple(blocks)

    aligned = conjugate_family(f2, graph, w)
    tolerance = get_settings().alignment_tolerance
    for v in finite:
        for u, u2 in zip(f1.unitaries.get(v, ()), aligned.unitaries.get(v, ())):
            check(_norm(u - u2) <= tolerance, "alignment failed", vertex=v)
    logger.debug("af_alignment_done", extra={"aligned": sorted(w)})
    return {
        v: w.get(v, tuple(np.eye(f1.dims[v][i], dtype=complex) for i in range(f1.target.blocks)))
        for v in graph.vertices
    }
