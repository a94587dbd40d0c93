"""Load and manage the catalog of named graphs."""

import json
from pathlib import Path

from graphinv.services.graph_core import Graph, validate

CATALOG_DIR = Path(__file__).parent

_catalog_cache: dict[str, dict] | None = None


def load_catalog() -> dict[str, dict]:
    """Load all catalog entries from JSON files.

    Returns:
        Dictionary mapping graph ID to its entry (id, name, description,
        vertices, edges).
    """
    global _catalog_cache
    if _catalog_cache is not None:
        return _catalog_cache

    entries = {}
    for file in sorted(CATALOG_DIR.glob("*.json")):
        with open(file, encoding="utf-8") as f:
            entry = json.load(f)
            entries[entry["id"]] = entry

    _catalog_cache = entries
    return entries


def get_graph(graph_id: str) -> Graph | None:
    """Get a catalog graph by ID.

    Args:
        graph_id: The catalog identifier (e.g., 'two_circles', 'o3')

    Returns:
        The validated Graph if found, None otherwise.
    """
    entry = load_catalog().get(graph_id)
    if entry is None:
        return None
    return validate(entry)


def list_graphs() -> list[dict]:
    """List catalog entries with metadata only."""
    return [
        {
            "id": e["id"],
            "name": e["name"],
            "description": e["description"],
            "vertices": len(e["vertices"]),
            "edges": len(e["edges"]),
        }
        for e in load_catalog().values()
    ]


def clear_cache() -> None:
    """Clear the catalog cache. Useful for testing."""
    global _catalog_cache
    _catalog_cache = None
