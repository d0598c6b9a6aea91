"""Vertex-labeled undirected simple graphs and their text file format.

The on-disk format is line oriented::

    t <num_vertices> <num_edges>
    v <id> <label> <degree>      one line per vertex, ids dense 0..n-1
    e <src> <dst>                src < dst, each undirected edge once

Lines starting with ``#`` are comments and may appear anywhere. Query
graphs and data graphs share the format.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Sequence


class GraphFormatError(ValueError):
    """A graph file violated the format or a graph invariant."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    """Immutable vertex-labeled undirected simple graph.

    Adjacency lists are sorted ascending, hold no duplicates and no
    self-loops, and ``degrees[v] == len(adj[v])``. Labels are dense
    non-negative ints; the alphabet is ``range(label_count)``.
    """

    labels: tuple[int, ...]
    adj: tuple[tuple[int, ...], ...]
    degrees: tuple[int, ...]

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return sum(self.degrees) // 2

    @property
    def label_count(self) -> int:
        return max(self.labels) + 1 if self.labels else 0

    @property
    def max_degree(self) -> int:
        return max(self.degrees) if self.degrees else 0

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def has_edge(self, a: int, b: int) -> bool:
        row = self.adj[a]
        i = bisect_left(row, b)
        return i < len(row) and row[i] == b

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (src, dst) with src < dst, sorted."""
        return [(a, b) for a in range(self.num_vertices) for b in self.adj[a] if a < b]

    @classmethod
    def from_edges(cls, labels: Sequence[int], edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a validated graph from per-vertex labels and an edge list."""
        n = len(labels)
        for i, lab in enumerate(labels):
            if lab < 0:
                raise GraphFormatError(f"vertex {i} has negative label {lab}")
        adj: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            if a == b:
                raise GraphFormatError(f"self-loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise GraphFormatError(f"edge ({a}, {b}) references unknown vertex")
            if b in adj[a]:
                raise GraphFormatError(f"duplicate edge ({a}, {b})")
            adj[a].add(b)
            adj[b].add(a)
        rows = tuple(tuple(sorted(s)) for s in adj)
        return cls(tuple(labels), rows, tuple(len(r) for r in rows))


def load_graph(path) -> Graph:
    """Parse a graph file, rejecting the whole file on the first defect.

    Raises GraphFormatError carrying the offending line number for
    malformed lines, duplicate vertices, unknown-vertex or duplicate
    edges, self-loops, id gaps, and degree mismatches.
    """
    header: tuple[int, int] | None = None
    labels: list[int | None] = []
    vertex_line: list[int] = []
    declared_degree: list[int] = []
    edges: list[tuple[int, int]] = []
    edge_seen: set[tuple[int, int]] = set()

    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            kind = parts[0]
            if kind == "t":
                if header is not None:
                    raise GraphFormatError("duplicate header", lineno)
                if len(parts) != 3:
                    raise GraphFormatError("malformed header, expected 't <|V|> <|E|>'", lineno)
                try:
                    nv, ne = int(parts[1]), int(parts[2])
                except ValueError:
                    raise GraphFormatError("malformed header, counts must be integers", lineno)
                if nv < 0 or ne < 0:
                    raise GraphFormatError("negative count in header", lineno)
                header = (nv, ne)
                labels = [None] * nv
                vertex_line = [0] * nv
                declared_degree = [0] * nv
            elif kind == "v":
                if header is None:
                    raise GraphFormatError("vertex line before header", lineno)
                if len(parts) != 4:
                    raise GraphFormatError("malformed vertex line, expected 'v <id> <label> <degree>'", lineno)
                try:
                    vid, lab, deg = int(parts[1]), int(parts[2]), int(parts[3])
                except ValueError:
                    raise GraphFormatError("malformed vertex line, fields must be integers", lineno)
                if not 0 <= vid < header[0]:
                    raise GraphFormatError(f"vertex id {vid} outside 0..{header[0] - 1}", lineno)
                if labels[vid] is not None:
                    raise GraphFormatError(f"duplicate vertex {vid}", lineno)
                if lab < 0:
                    raise GraphFormatError(f"negative label {lab}", lineno)
                labels[vid] = lab
                vertex_line[vid] = lineno
                declared_degree[vid] = deg
            elif kind == "e":
                if header is None:
                    raise GraphFormatError("edge line before header", lineno)
                if len(parts) != 3:
                    raise GraphFormatError("malformed edge line, expected 'e <src> <dst>'", lineno)
                try:
                    a, b = int(parts[1]), int(parts[2])
                except ValueError:
                    raise GraphFormatError("malformed edge line, endpoints must be integers", lineno)
                if a == b:
                    raise GraphFormatError(f"self-loop at vertex {a}", lineno)
                if a > b:
                    raise GraphFormatError(f"edge ({a}, {b}) must be written src < dst", lineno)
                for end in (a, b):
                    if not 0 <= end < header[0] or labels[end] is None:
                        raise GraphFormatError(f"edge references unknown vertex {end}", lineno)
                if (a, b) in edge_seen:
                    raise GraphFormatError(f"duplicate edge ({a}, {b})", lineno)
                edge_seen.add((a, b))
                edges.append((a, b))
            else:
                raise GraphFormatError(f"unknown record type {kind!r}", lineno)

    if header is None:
        raise GraphFormatError("missing 't <|V|> <|E|>' header")
    for vid, lab in enumerate(labels):
        if lab is None:
            raise GraphFormatError(f"vertex {vid} never declared (ids must be dense 0..{header[0] - 1})")
    if len(edges) != header[1]:
        raise GraphFormatError(f"header declares {header[1]} edges, file has {len(edges)}")

    graph = Graph.from_edges([int(x) for x in labels], edges)  # type: ignore[arg-type]
    for vid in range(header[0]):
        if declared_degree[vid] != graph.degrees[vid]:
            raise GraphFormatError(
                f"vertex {vid} declares degree {declared_degree[vid]} but has {graph.degrees[vid]}",
                vertex_line[vid],
            )
    return graph


def graph_to_text(graph: Graph) -> str:
    """Canonical text encoding; load_graph(save_graph(g)) == g."""
    lines = [f"t {graph.num_vertices} {graph.num_edges}"]
    for v in range(graph.num_vertices):
        lines.append(f"v {v} {graph.labels[v]} {graph.degrees[v]}")
    for a, b in graph.edges():
        lines.append(f"e {a} {b}")
    return "\n".join(lines) + "\n"


def save_graph(graph: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(graph_to_text(graph))


def candidates_by_local_features(data: Graph, query: Graph, u: int) -> list[int]:
    """Data vertices matching u's label with at least u's degree, ascending.

    This is the weakest sound per-vertex filter: any embedding must map u
    to a vertex with the same label and at least as many neighbors.
    """
    lab = query.labels[u]
    deg = query.degrees[u]
    return [v for v in range(data.num_vertices) if data.labels[v] == lab and data.degrees[v] >= deg]
