"""Prometheus metrics for invariant computations."""

import time
from contextlib import contextmanager

from prometheus_client import Counter, Histogram

LATTICE_ENUMERATIONS_TOTAL = Counter(
    "graphinv_lattice_enumerations_total",
    "Total hereditary saturated lattice enumerations",
)

LATTICE_SIZE = Histogram(
    "graphinv_lattice_size",
    "Number of elements in enumerated lattices",
    buckets=[1, 2, 4, 8, 16, 32, 64, 128, 256, 1024],
)

SNF_TOTAL = Counter(
    "graphinv_snf_total",
    "Total Smith normal form computations",
)

VERDICTS_TOTAL = Counter(
    "graphinv_verdicts_total",
    "Classification verdicts rendered",
    ["conclusion"],
)

CORPUS_GRAPHS_TOTAL = Counter(
    "graphinv_corpus_graphs_total",
    "Graphs processed by corpus scans",
)

OPERATION_DURATION_SECONDS = Histogram(
    "graphinv_operation_duration_seconds",
    "Duration of top-level operations in seconds",
    ["operation"],
    buckets=[0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 30.0, 120.0],
)


def record_lattice(size: int) -> None:
    """Record one lattice enumeration of the given size."""
    LATTICE_ENUMERATIONS_TOTAL.inc()
    LATTICE_SIZE.observe(size)


def record_verdict(conclusion: str) -> None:
    """Record a rendered verdict by its conclusion label."""
    VERDICTS_TOTAL.labels(conclusion=conclusion).inc()


@contextmanager
def timed(operation: str):
    """Observe the wall time of the enclosed block."""
    start = time.perf_counter()
    try:
        yield
    finally:
        OPERATION_DURATION_SECONDS.labels(operation=operation).observe(
            time.perf_counter() - start
        )
