"""Named example graphs shipped with the package."""

from graphinv.catalog.loader import clear_cache, get_graph, list_graphs, load_catalog

__all__ = ["clear_cache", "get_graph", "list_graphs", "load_catalog"]
