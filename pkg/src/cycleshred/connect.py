"""Close matchings into few cycles using connector paths from a reserved graph.

A matching edge u-v (or a center-tagged pairing u-c-v standing for the two
real edges c-u, c-v) is chained to the next matching edge by a connector path;
one extra path closes each chain into a simple cycle.  All connector paths in
one closure are vertex-disjoint, avoid every matching endpoint except their
own two, and avoid all centers, so the assembled cycles are simple even after
expanding the center tags.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .gen import derive_seed, edge_ids, hash_unit
from .graph import Edge, EdgeSet, Graph, canonical_edge


@dataclass
class TaggedMatching:
    """Matching edges with an optional center vertex per edge.

    A tagged entry (u, v) with center c stands for the path u-c-v; its real
    graph edges are (c, u) and (c, v).
    """

    edges: list = field(default_factory=list)
    centers: list = field(default_factory=list)

    def __post_init__(self):
        if not self.centers:
            self.centers = [None] * len(self.edges)
        if len(self.centers) != len(self.edges):
            raise ValueError("centers must align with edges")

    def __len__(self) -> int:
        return len(self.edges)

    def add(self, u: int, v: int, center: int | None = None) -> None:
        self.edges.append(canonical_edge(u, v))
        self.centers.append(center)

    def endpoints(self) -> set[int]:
        return {v for e in self.edges for v in e}

    def real_edges(self, index: int) -> list[Edge]:
        """The host-graph edges entry index stands for."""
        (u, v), c = self.edges[index], self.centers[index]
        if c is None:
            return [canonical_edge(u, v)]
        return [canonical_edge(c, u), canonical_edge(c, v)]


@dataclass(frozen=True)
class PairRequest:
    pairs: tuple

    def __init__(self, pairs):
        pairs = tuple((int(a), int(b)) for a, b in pairs)
        flat = [v for p in pairs for v in p]
        if len(set(flat)) != len(flat):
            raise ValueError("pair endpoints must be pairwise distinct")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass
class ConnectResult:
    paths: list  # per pair: vertex list or None
    unserved: list  # indices of unserved pairs

    @property
    def served(self) -> int:
        return len(self.paths) - len(self.unserved)


@dataclass
class ClosureResult:
    cycles: list = field(default_factory=list)
    connector_edges_used: EdgeSet = field(default_factory=set)
    covered_edges: EdgeSet = field(default_factory=set)  # real matching edges on cycles
    failed_edges: list = field(default_factory=list)  # real edges demoted to singles
    failed_entries: list = field(default_factory=list)  # indices into the matching


def edge_color(h: Graph) -> list[TaggedMatching]:
    """Partition the edges into matchings by greedy first-fit coloring.

    Uses at most 2*maxdeg - 1 classes; classes come out in color order.
    """
    vertex_colors: list[set] = [set() for _ in range(h.n)]
    classes: list[TaggedMatching] = []
    for u, v in sorted(h.edges()):
        taken = vertex_colors[u] | vertex_colors[v]
        color = 0
        while color in taken:
            color += 1
        while color >= len(classes):
            classes.append(TaggedMatching())
        classes[color].add(u, v)
        vertex_colors[u].add(color)
        vertex_colors[v].add(color)
    return classes


def neighborhood_ratio(g: Graph, s) -> float:
    """Largest fraction of any non-isolated vertex's neighborhood inside s."""
    s_set = set(s)
    best = 0.0
    for v in range(g.n):
        d = g.degree(v)
        if d == 0:
            continue
        inside = sum(1 for w in g.neighbors(v) if w in s_set)
        if inside / d > best:
            best = inside / d
    return best


def sparsify_split(
    gc: Graph, m: TaggedMatching, k: int, seed: int
) -> list[tuple[Graph, TaggedMatching]]:
    """Split a connector graph into k uniform random parts and the matching
    into k sub-matchings, independently per edge."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return [(gc, m)]
    graphs = [Graph(gc.n) for _ in range(k)]
    if gc.m:
        edges = list(gc.edges())
        us = np.fromiter((e[0] for e in edges), dtype=np.int64, count=len(edges))
        vs = np.fromiter((e[1] for e in edges), dtype=np.int64, count=len(edges))
        part = (hash_unit(edge_ids(us, vs, gc.n), derive_seed(seed, 1)) * k).astype(np.int64)
        for (u, v), i in zip(edges, part.tolist()):
            graphs[i].add_edge(u, v)
    matchings = [TaggedMatching() for _ in range(k)]
    if len(m):
        idx = np.arange(len(m), dtype=np.uint64)
        part = (hash_unit(idx, derive_seed(seed, 2)) * k).astype(np.int64)
        for j, i in enumerate(part.tolist()):
            matchings[i].add(*m.edges[j], m.centers[j])
    return list(zip(graphs, matchings))


class _PathRouter:
    """Serves vertex-disjoint path requests over one connector graph.

    protected vertices are never interior to any path; used interiors
    accumulate across requests so served paths stay disjoint.
    """

    def __init__(self, gc: Graph, protected, blocked, max_path_len: int):
        self.gc = gc
        self.protected = set(protected)
        self.off_limits = set(blocked)
        self.used: set[int] = set()
        self.max_path_len = max_path_len

    def route(self, a: int, b: int) -> list | None:
        gc = self.gc
        if gc.has_edge(a, b):
            return [a, b]
        banned = self.protected | self.off_limits | self.used
        parent = {a: -1}
        frontier = [a]
        depth = 0
        while frontier and depth < self.max_path_len:
            depth += 1
            nxt = []
            for u in frontier:
                for w in gc._adj[u]:
                    if w == b:
                        path = [b, u]
                        while path[-1] != a:
                            path.append(parent[path[-1]])
                        path.reverse()
                        for inner in path[1:-1]:
                            self.used.add(inner)
                        return path
                    if w not in parent and w not in banned:
                        parent[w] = u
                        nxt.append(w)
            frontier = nxt
        return None


def _default_path_cap(gc: Graph) -> int:
    avg = 2.0 * gc.m / gc.n if gc.n else 0.0
    if avg <= 2.0:
        return max(4, int(math.log(gc.n + 2) * 4))
    return max(3, math.ceil(4.0 * math.log(gc.n) / math.log(avg)))


def connect_pairs(
    gc: Graph,
    req,
    *,
    max_path_len: int | None = None,
    retries: int = 3,
    seed: int = 0,
    blocked=(),
) -> ConnectResult:
    """Find internally vertex-disjoint paths for the requested disjoint pairs.

    Paths avoid every request vertex except their own endpoints and never pass
    through blocked vertices.  Unserved pairs are reported, not raised; pairs
    get reshuffled retry passes after the first sweep.
    """
    pairs = req.pairs if isinstance(req, PairRequest) else PairRequest(req).pairs
    cap = _default_path_cap(gc) if max_path_len is None else max_path_len
    endpoints = {v for p in pairs for v in p}
    router = _PathRouter(gc, endpoints, blocked, cap)
    paths: list = [None] * len(pairs)
    pending = list(range(len(pairs)))
    rng = random.Random(seed)
    for _ in range(max(1, retries)):
        if not pending:
            break
        rng.shuffle(pending)
        still = []
        for i in pending:
            a, b = pairs[i]
            path = router.route(a, b)
            if path is None:
                still.append(i)
            else:
                paths[i] = path
        pending = still
    return ConnectResult(paths=paths, unserved=sorted(pending))


def build_auxiliary_pairing(h0: Graph, v0) -> tuple[list[TaggedMatching], list[Edge]]:
    """Pair up each hub vertex's outside neighbors into center-tagged edges,
    then split the pairings into matchings on their endpoints.

    Each tagged edge (w, w') with center v stands for the length-2 path w-v-w'.
    A hub with an odd neighborhood leaves one real edge over, returned as
    leftover.  Hub-to-hub edges are not touched here.
    """
    v0_set = set(v0)
    tagged: list[tuple[int, int, int]] = []
    leftover: list[Edge] = []
    for v in sorted(v0_set):
        nbrs = sorted(w for w in h0.neighbors(v) if w not in v0_set)
        for i in range(0, len(nbrs) - 1, 2):
            tagged.append((nbrs[i], nbrs[i + 1], v))
        if len(nbrs) % 2 == 1:
            leftover.append(canonical_edge(v, nbrs[-1]))
    # greedy color on the w endpoints; centers may repeat inside a class
    vertex_colors: dict[int, set] = {}
    classes: list[TaggedMatching] = []
    for u, w, c in tagged:
        taken = vertex_colors.setdefault(u, set()) | vertex_colors.setdefault(w, set())
        color = 0
        while color in taken:
            color += 1
        while color >= len(classes):
            classes.append(TaggedMatching())
        classes[color].add(u, w, c)
        vertex_colors[u].add(color)
        vertex_colors[w].add(color)
    return classes, leftover


def split_avoiding_duplicates(
    m: TaggedMatching, group_cap: int | None = None
) -> list[TaggedMatching]:
    """Greedy first-fit split so no group holds two edges with the same center
    (untagged edges never collide); group sizes optionally capped."""
    groups: list[TaggedMatching] = []
    group_centers: list[set] = []
    for edge, center in zip(m.edges, m.centers):
        placed = False
        for i, group in enumerate(groups):
            if group_cap is not None and len(group) >= group_cap:
                continue
            if center is not None and center in group_centers[i]:
                continue
            group.add(*edge, center)
            if center is not None:
                group_centers[i].add(center)
            placed = True
            break
        if not placed:
            groups.append(TaggedMatching())
            group_centers.append(set())
            groups[-1].add(*edge, center)
            if center is not None:
                group_centers[-1].add(center)
    return groups


def _entry_vertices(m: TaggedMatching, index: int) -> list[int]:
    (u, v), c = m.edges[index], m.centers[index]
    return [u, v] if c is None else [u, c, v]


def close_matching_into_cycles(
    gc: Graph,
    m: TaggedMatching,
    *,
    max_path_len: int | None = None,
    retries: int = 3,
    salvage_attempts: int = 3,
    seed: int = 0,
) -> ClosureResult:
    """Chain the matching's edges into cycles with connector paths from gc.

    Served edges land on simple cycles alternating matching edges (expanded
    through their centers) and connector paths; edges that cannot be chained or
    closed are demoted to single real edges.  Requires distinct centers within
    the matching.
    """
    result = ClosureResult()
    k = len(m)
    if k == 0:
        return result
    centers = [c for c in m.centers if c is not None]
    if len(set(centers)) != len(centers):
        raise ValueError("matching has duplicate centers; split it first")
    all_vertices = {v for i in range(k) for v in _entry_vertices(m, i)}
    if sum(len(_entry_vertices(m, i)) for i in range(k)) != len(all_vertices):
        raise ValueError("matching entries overlap; not a matching after expansion")

    cap = _default_path_cap(gc) if max_path_len is None else max_path_len
    endpoints = m.endpoints()
    router = _PathRouter(gc, endpoints, set(centers), cap)
    rng = random.Random(seed)

    # chain link i joins entry i's second endpoint to entry (i+1)'s first
    links: list = [None] * k
    order = list(range(k))
    for _ in range(max(1, retries)):
        pending = [i for i in order if links[i] is None]
        if not pending:
            break
        rng.shuffle(pending)
        for i in pending:
            a = m.edges[i][1]
            b = m.edges[(i + 1) % k][0]
            if k == 1:
                a, b = m.edges[0][1], m.edges[0][0]
            links[i] = router.route(a, b)

    def emit_cycle(entries: list[int], paths: list) -> None:
        # paths[j] connects entries[j] to entries[j+1] (last one wraps)
        cycle: list[int] = []
        for j, idx in enumerate(entries):
            cycle.extend(_entry_vertices(m, idx))
            cycle.extend(paths[j][1:-1])
        assert len(cycle) == len(set(cycle)), "closure produced a non-simple cycle"
        assert len(cycle) >= 3
        result.cycles.append(cycle)
        for j, idx in enumerate(entries):
            result.covered_edges.update(m.real_edges(idx))
            for x, y in zip(paths[j], paths[j][1:]):
                result.connector_edges_used.add(canonical_edge(x, y))

    def demote(idx: int) -> None:
        result.failed_entries.append(idx)
        result.failed_edges.extend(m.real_edges(idx))

    if all(link is not None for link in links) and k >= 1:
        emit_cycle(list(range(k)), links)
        return result

    # broken ring: collect maximal arcs of consecutively linked entries
    broken = [i for i in range(k) if links[i] is None]
    arcs: list[list[int]] = []
    for pos, b in enumerate(broken):
        prev_break = broken[pos - 1]
        arc = [(prev_break + 1 + j) % k for j in range((b - prev_break - 1) % k + 1)]
        arcs.append(arc)

    for arc in arcs:
        closed = False
        attempts = 0
        while arc and attempts < salvage_attempts:
            attempts += 1
            tail, head = arc[-1], arc[0]
            closing = router.route(m.edges[tail][1], m.edges[head][0])
            if closing is not None:
                paths = [links[arc[j]] for j in range(len(arc) - 1)] + [closing]
                emit_cycle(arc, paths)
                closed = True
                break
            demote(arc.pop())  # shorten the arc and retry the closure
        if not closed:
            for idx in arc:
                demote(idx)
    result.failed_entries.sort()
    return result
