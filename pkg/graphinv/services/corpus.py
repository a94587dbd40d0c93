"""Seeded random graph corpora bucketed by invariant digest.

Equal digests are necessary, not sufficient, for isomorphic invariants;
graphs sharing a bucket are flagged for a full verdict.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from graphinv.config import get_settings
from graphinv.errors import TooLarge
from graphinv.logging_config import run_id
from graphinv.metrics import CORPUS_GRAPHS_TOTAL, timed
from graphinv.schemas.reports import CorpusBucket, CorpusEntry, CorpusReport
from graphinv.services.graph_core import Graph, validate
from graphinv.services.graph_io import graph_digest
from graphinv.services.invariant_compare import invariant_bundle

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorpusBounds:
    max_vertices: int = 5
    max_edges: int = 8


@dataclass(frozen=True, eq=False)
class ScannedGraph:
    index: int
    graph: Graph
    invariant_digest: str


def random_graph(rng: np.random.Generator, bounds: CorpusBounds) -> Graph:
    """Multigraph with uniform vertex count and edges between uniform endpoints."""
    n = int(rng.integers(1, bounds.max_vertices + 1))
    m = int(rng.integers(0, bounds.max_edges + 1))
    vertices = [f"v{i}" for i in range(n)]
    ends = rng.integers(0, n, size=(m, 2))
    edges = [(f"e{k}", vertices[int(s)], vertices[int(r)]) for k, (s, r) in enumerate(ends)]
    return validate({"vertices": vertices, "edges": edges})


def generate_corpus(seed: int, count: int, bounds: CorpusBounds) -> list[Graph]:
    """One independent stream per graph, so the corpus does not depend on scheduling."""
    streams = np.random.SeedSequence(seed).spawn(count)
    return [random_graph(np.random.default_rng(s), bounds) for s in streams]


def _scan_one(index: int, graph: Graph, seed: int) -> ScannedGraph:
    token = run_id.set(f"corpus-{seed}-{index}")
    try:
        digest = invariant_bundle(graph).digest
    finally:
        run_id.reset(token)
    CORPUS_GRAPHS_TOTAL.inc()
    return ScannedGraph(index, graph, digest)


def corpus_scan(
    seed: int,
    count: int,
    bounds: CorpusBounds | None = None,
    threads: int | None = None,
) -> CorpusReport:
    """Generate, fingerprint and bucket ``count`` graphs.

    Raises:
        TooLarge: if the vertex bound exceeds the enumeration limit
    """
    settings = get_settings()
    bounds = bounds or CorpusBounds()
    threads = settings.threads if threads is None else threads
    if bounds.max_vertices > settings.max_lattice_vertices:
        raise TooLarge(
            f"Corpus graphs may have {bounds.max_vertices} vertices, limit is {settings.max_lattice_vertices}",
            vertices=bounds.max_vertices,
            bound=settings.max_lattice_vertices,
        )

    graphs = generate_corpus(seed, count, bounds)
    with timed("corpus_scan"), ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        scanned = list(pool.map(_scan_one, range(count), graphs, [seed] * count))

    buckets: dict[str, list[ScannedGraph]] = {}
    for item in scanned:
        buckets.setdefault(item.invariant_digest, []).append(item)

    report = CorpusReport(
        seed=str(seed),
        count=str(count),
        max_vertices=str(bounds.max_vertices),
        max_edges=str(bounds.max_edges),
        buckets=[
            CorpusBucket(
                invariant_digest=digest,
                graphs=[
                    CorpusEntry(
                        index=str(item.index),
                        graph_digest=graph_digest(item.graph),
                        vertices=str(len(item.graph.vertices)),
                        edges=str(len(item.graph.edges)),
                    )
                    for item in members
                ],
                flagged_pairs=[
                    [str(a.index), str(b.index)] for a, b in combinations(members, 2)
                ],
            )
            for digest, members in sorted(buckets.items())
        ],
    )
    logger.info("corpus_scanned", extra={"seed": seed, "count": count, "buckets": len(buckets)})
    return report
