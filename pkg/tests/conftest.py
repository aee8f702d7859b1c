import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from cycleshred.graph import Graph


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def hypercube_graph(dim: int) -> Graph:
    n = 1 << dim
    edges = []
    for v in range(n):
        for b in range(dim):
            u = v ^ (1 << b)
            if v < u:
                edges.append((v, u))
    return Graph(n, edges)


def disjoint_union(*graphs: Graph) -> Graph:
    total = sum(g.n for g in graphs)
    out = Graph(total)
    offset = 0
    for g in graphs:
        for u, v in g.edges():
            out.add_edge(u + offset, v + offset)
        offset += g.n
    return out
