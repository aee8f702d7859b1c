"""Simple undirected graphs, edge-set algebra, and the decomposition container.

Vertices are dense integer ids 0..n-1.  Edges are canonical (min, max) pairs;
self-loops and parallel edges are rejected everywhere.  Adjacency is stored as
one insertion-ordered dict per vertex, which gives O(1) membership tests,
O(1) deletion, and deterministic iteration order.
"""

from __future__ import annotations

import io
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

Edge = tuple[int, int]
EdgeSet = set  # of canonical Edge tuples
Cycle = list  # of vertex ids, consecutive pairs (cyclically) are edges

# provenance labels a decomposition piece may carry
STAGES = (
    "euler-repair",
    "long-cycle",
    "hamilton",
    "matching-closure",
    "peel",
    "leftover-edge",
)


def canonical_edge(u: int, v: int) -> Edge:
    """Return the (min, max) form of an undirected edge."""
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


def cycle_edges(cycle: Cycle) -> Iterator[Edge]:
    """Canonical edges of a cycle given as a vertex sequence (wraps around)."""
    k = len(cycle)
    for i in range(k):
        yield canonical_edge(cycle[i], cycle[(i + 1) % k])


class Graph:
    """Mutable simple undirected graph on vertices 0..n-1."""

    __slots__ = ("n", "_adj", "_m")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = n
        self._adj: list[dict[int, None]] = [{} for _ in range(n)]
        self._m = 0
        for u, v in edges:
            self.add_edge(u, v)

    @property
    def m(self) -> int:
        return self._m

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
        if v in self._adj[u]:
            raise ValueError(f"duplicate edge ({u}, {v})")
        self._adj[u][v] = None
        self._adj[v][u] = None
        self._m += 1

    def remove_edge(self, u: int, v: int) -> None:
        try:
            del self._adj[u][v]
            del self._adj[v][u]
        except KeyError:
            raise ValueError(f"edge ({u}, {v}) not present") from None
        self._m -= 1

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and v in self._adj[u]

    def neighbors(self, v: int):
        """Neighbor view of v (insertion-ordered, do not mutate while iterating)."""
        return self._adj[v].keys()

    def degree(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range for n={self.n}")
        return len(self._adj[v])

    def edges(self) -> Iterator[Edge]:
        for u in range(self.n):
            for v in self._adj[u]:
                if u < v:
                    yield (u, v)

    def edge_set(self) -> EdgeSet:
        return set(self.edges())

    def copy(self) -> "Graph":
        g = Graph.__new__(Graph)
        g.n = self.n
        g._adj = [d.copy() for d in self._adj]
        g._m = self._m
        return g

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edge_set() == other.edge_set()

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self._m})"


def degree(g: Graph, v: int) -> int:
    """Number of edges incident to v."""
    return g.degree(v)


def odd_vertices(g: Graph) -> set[int]:
    """Vertices of odd degree.  Always an even-sized set."""
    return {v for v in range(g.n) if len(g._adj[v]) % 2 == 1}


def symmetric_difference(a: EdgeSet, b: EdgeSet) -> EdgeSet:
    """Edges appearing in exactly one of a, b (mod-2 union)."""
    return set(a) ^ set(b)


def remove_edges(g: Graph, drop: Iterable[Edge]) -> Graph:
    """New graph with the given edges removed; they must all be present."""
    out = g.copy()
    for u, v in drop:
        if not out.has_edge(u, v):
            raise ValueError(f"edge ({u}, {v}) not in graph")
        out.remove_edge(u, v)
    return out


def connected_components(g: Graph) -> list[list[int]]:
    """Vertex sets of the connected components, largest first.

    Ties break toward the component with the smallest vertex id, so the
    "giant" pick is deterministic.
    """
    seen = bytearray(g.n)
    comps: list[list[int]] = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = 1
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g._adj[u]:
                if not seen[w]:
                    seen[w] = 1
                    comp.append(w)
                    queue.append(w)
        comps.append(comp)
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def is_euler(g: Graph) -> bool:
    """True iff every vertex has even degree (connectivity not required)."""
    return all(len(d) % 2 == 0 for d in g._adj)


@dataclass
class Decomposition:
    """Edge-disjoint simple cycles plus single edges covering a host graph.

    provenance[i] labels piece i, with cycles listed before single edges.
    """

    n: int
    cycles: list[Cycle] = field(default_factory=list)
    single_edges: list[Edge] = field(default_factory=list)
    provenance: list[str] = field(default_factory=list)

    @property
    def piece_count(self) -> int:
        return len(self.cycles) + len(self.single_edges)

    def covered_edge_count(self) -> int:
        return sum(len(c) for c in self.cycles) + len(self.single_edges)

    def add_cycle(self, cycle: Cycle, stage: str) -> None:
        self.cycles.append(list(cycle))
        self.provenance.insert(len(self.cycles) - 1, stage)

    def add_edge(self, edge: Edge, stage: str) -> None:
        self.single_edges.append(canonical_edge(*edge))
        self.provenance.append(stage)

    def stage_counts(self) -> dict[str, int]:
        counts = {s: 0 for s in STAGES}
        for label in self.provenance:
            counts[label] = counts.get(label, 0) + 1
        return counts

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "cycles": [list(c) for c in self.cycles],
            "edges": [[u, v] for u, v in self.single_edges],
            "provenance": list(self.provenance),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Decomposition":
        try:
            return cls(
                n=int(data["n"]),
                cycles=[[int(v) for v in c] for c in data["cycles"]],
                single_edges=[(int(u), int(v)) for u, v in data["edges"]],
                provenance=[str(s) for s in data["provenance"]],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed decomposition JSON: {exc}") from exc


def write_edge_list(g: Graph, path_or_file) -> None:
    """Write the canonical edge-list format: "n m" then sorted "u v" lines."""
    if isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__"):
        with open(path_or_file, "w", encoding="utf-8", newline="\n") as fh:
            write_edge_list(g, fh)
        return
    fh = path_or_file
    fh.write(f"{g.n} {g.m}\n")
    for u, v in sorted(g.edges()):
        fh.write(f"{u} {v}\n")


def read_edge_list(path_or_file) -> Graph:
    """Read an edge list; edges in any order are accepted and normalized."""
    if isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__"):
        with open(path_or_file, "r", encoding="utf-8") as fh:
            return read_edge_list(fh)
    fh = path_or_file
    header = fh.readline().split()
    if len(header) != 2:
        raise ValueError("edge list header must be 'n m'")
    n, m = int(header[0]), int(header[1])
    g = Graph(n)
    count = 0
    for lineno, line in enumerate(fh, start=2):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v'")
        u, v = int(parts[0]), int(parts[1])
        g.add_edge(*canonical_edge(u, v))
        count += 1
    if count != m:
        raise ValueError(f"header says m={m} but file has {count} edges")
    return g


def edge_list_text(g: Graph) -> str:
    buf = io.StringIO()
    write_edge_list(g, buf)
    return buf.getvalue()
