"""Unit tests for the shipped graph catalog."""

import re
from pathlib import Path

import pytest

from graphinv.catalog import clear_cache, get_graph, list_graphs, load_catalog
from graphinv.services.graph_core import Graph

CATALOG_IDS = {"chain2", "empty", "o2", "o3", "two_circles", "single_loop", "toeplitz"}


class TestLoadCatalog:
    """Tests for load_catalog function."""

    def setup_method(self):
        clear_cache()

    def test_contains_expected_ids(self):
        assert set(load_catalog()) == CATALOG_IDS

    def test_caches_results(self):
        assert load_catalog() is load_catalog()

    def test_clear_cache_reloads(self):
        first = load_catalog()
        clear_cache()
        assert load_catalog() is not first


class TestGetGraph:
    def setup_method(self):
        clear_cache()

    @pytest.mark.parametrize("graph_id", sorted(CATALOG_IDS))
    def test_every_entry_validates(self, graph_id):
        assert isinstance(get_graph(graph_id), Graph)

    def test_two_circles_graph(self):
        graph = get_graph("two_circles")
        assert graph.vertices == ("1", "2", "3")
        assert graph.src["c"] == "1"
        assert graph.rng["c"] == "3"

    def test_unknown_id(self):
        assert get_graph("nonexistent") is None

    def test_empty_graph(self):
        graph = get_graph("empty")
        assert graph.vertices == ()
        assert graph.edges == ()


class TestListGraphs:
    def setup_method(self):
        clear_cache()

    def test_metadata_only(self):
        entries = {e["id"]: e for e in list_graphs()}
        assert set(entries) == CATALOG_IDS
        assert entries["o3"]["vertices"] == 1
        assert entries["o3"]["edges"] == 3
        assert entries["o3"]["name"] == "Cuntz O3"


class TestDocumentedIds:
    """Catalog ids quoted in the README and setup script must resolve."""

    @pytest.mark.parametrize("name", ["README.md", "setup.sh"])
    def test_quoted_ids_exist(self, name):
        text = (Path(__file__).resolve().parents[2] / name).read_text(encoding="utf-8")
        quoted = set(re.findall(r"catalog:([A-Za-z0-9_]+)", text))
        assert quoted
        assert quoted <= CATALOG_IDS
