"""
Shared pytest fixtures for graphinv tests.
"""

import pytest
from hypothesis import strategies as st

from graphinv.catalog import get_graph
from graphinv.config import get_settings
from graphinv.services.graph_core import Graph, validate


def catalog_graph(graph_id: str) -> Graph:
    graph = get_graph(graph_id)
    assert graph is not None, graph_id
    return graph


@pytest.fixture
def two_circles():
    """Two loops feeding a common sink: lattice {}, {1}, {2}, {1,2,3}."""
    return catalog_graph("two_circles")


@pytest.fixture
def single_loop():
    return catalog_graph("single_loop")


@pytest.fixture
def o2():
    return catalog_graph("o2")


@pytest.fixture
def o3():
    return catalog_graph("o3")


@pytest.fixture
def chain2():
    return catalog_graph("chain2")


@pytest.fixture
def toeplitz():
    return catalog_graph("toeplitz")


@pytest.fixture
def empty_graph():
    return catalog_graph("empty")


@pytest.fixture
def settings_env(monkeypatch):
    """Set GRAPHINV_* variables for one test and refresh the cached settings."""

    def apply(**values):
        for key, value in values.items():
            monkeypatch.setenv(f"GRAPHINV_{key.upper()}", str(value))
        get_settings.cache_clear()
        return get_settings()

    yield apply
    get_settings.cache_clear()


def make_graph(vertices, edges) -> Graph:
    """Build a graph from a vertex list and (id, src, rng) triples."""
    return validate({"vertices": vertices, "edges": edges})


@st.composite
def small_graphs(draw, max_vertices: int = 4, max_edges: int = 6):
    """Random multigraphs on v0..v{n-1} with edges e0..e{m-1}."""
    n = draw(st.integers(min_value=1, max_value=max_vertices))
    vertices = [f"v{i}" for i in range(n)]
    ends = draw(
        st.lists(
            st.tuples(st.sampled_from(vertices), st.sampled_from(vertices)),
            max_size=max_edges,
        )
    )
    return make_graph(vertices, [(f"e{k}", s, r) for k, (s, r) in enumerate(ends)])
