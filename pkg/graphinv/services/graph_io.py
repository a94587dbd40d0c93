"""Line-oriented graph files.

    # comment
    vertex v
    edge e v v

Vertices must be declared before an edge uses them.
"""

import hashlib
from pathlib import Path

from graphinv.errors import DuplicateId, ParseError, UnknownVertex
from graphinv.services.graph_core import IDENTIFIER, Graph, validate


def parse_graph_text(text: str, source: str = "<string>") -> Graph:
    """Parse graph text.

    Raises:
        ParseError: on a malformed line
        DuplicateId: on a repeated vertex or edge identifier
        UnknownVertex: if an edge uses an undeclared vertex
    """
    vertices: list[str] = []
    declared: set[str] = set()
    edges: list[tuple[str, str, str]] = []
    edge_ids: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        where = {"source": source, "line": lineno}
        for token in fields[1:]:
            if not IDENTIFIER.match(token):
                raise ParseError(f"Invalid identifier '{token}'", identifier=token, **where)

        if fields[0] == "vertex" and len(fields) == 2:
            v = fields[1]
            if v in declared:
                raise DuplicateId(f"Duplicate vertex '{v}'", identifier=v, **where)
            declared.add(v)
            vertices.append(v)
        elif fields[0] == "edge" and len(fields) == 4:
            e, s, r = fields[1:]
            if e in edge_ids:
                raise DuplicateId(f"Duplicate edge '{e}'", identifier=e, **where)
            for v in (s, r):
                if v not in declared:
                    raise UnknownVertex(f"Edge '{e}' uses undeclared vertex '{v}'", vertex=v, **where)
            edge_ids.add(e)
            edges.append((e, s, r))
        else:
            raise ParseError(f"Cannot parse line: {line}", **where)

    return validate({"vertices": vertices, "edges": edges})


def load_graph_file(path: str | Path) -> Graph:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"Cannot read graph file: {exc}", source=str(path)) from exc
    return parse_graph_text(text, source=str(path))


def serialize_graph(graph: Graph) -> str:
    lines = [f"vertex {v}" for v in graph.vertices]
    lines += [f"edge {e} {graph.src[e]} {graph.rng[e]}" for e in graph.edges]
    return "\n".join(lines) + "\n"


def graph_digest(graph: Graph) -> str:
    """sha256 of the canonical serialization."""
    return hashlib.sha256(serialize_graph(graph).encode("utf-8")).hexdigest()
