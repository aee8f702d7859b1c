"""Repair edge sets: find a small edge set whose removal leaves all degrees even.

The construction is greedy matching on the target vertices, then shortest-path
pairing of the leftovers, combined by mod-2 union.  Paths are allowed to
overlap each other and the matching; parity absorbs the collisions.
"""

from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass, field

from .graph import (
    EdgeSet,
    Graph,
    canonical_edge,
    connected_components,
    odd_vertices,
)


@dataclass
class PathPairing:
    paths: list = field(default_factory=list)
    residue: list = field(default_factory=list)


@dataclass
class EulerRepair:
    """Result of euler_reduction.

    edges is the combined repair set; removing it flips the parity of exactly
    the achieved target vertices.  tree_part is the slice of the repair lying
    outside the largest component.
    """

    edges: EdgeSet
    matching_part: EdgeSet
    path_part: list
    tree_part: EdgeSet
    residue: list
    stats: dict


def greedy_odd_matching(g: Graph, targets) -> tuple[EdgeSet, set[int]]:
    """Greedily match target vertices along graph edges.

    Scans vertices in increasing id order and pairs each unmatched target with
    its smallest unmatched target neighbor.  The leftover set is independent:
    no edge of g joins two of its vertices.
    """
    target_set = set(targets)
    matched: set[int] = set()
    matching: EdgeSet = set()
    for u in sorted(target_set):
        if u in matched:
            continue
        best = -1
        for w in g.neighbors(u):
            if w in target_set and w not in matched and (best < 0 or w < best):
                best = w
        if best >= 0:
            matched.add(u)
            matched.add(best)
            matching.add(canonical_edge(u, best))
    return matching, target_set - matched


def _augment_length3(g: Graph, matching: EdgeSet, leftover: set[int]) -> None:
    # single pass: unmatched u - x, mate(x) = y, y - v unmatched  =>  rematch
    mate: dict[int, int] = {}
    for a, b in matching:
        mate[a] = b
        mate[b] = a
    for u in sorted(leftover):
        if u not in leftover:
            continue
        done = False
        for x in sorted(g.neighbors(u)):
            if x not in mate:
                continue
            y = mate[x]
            for v in sorted(g.neighbors(y)):
                if v != u and v in leftover:
                    matching.discard(canonical_edge(x, y))
                    matching.add(canonical_edge(u, x))
                    matching.add(canonical_edge(y, v))
                    mate[u] = x
                    mate[x] = u
                    mate[y] = v
                    mate[v] = y
                    leftover.discard(u)
                    leftover.discard(v)
                    done = True
                    break
            if done:
                break


def _bfs_path(g: Graph, src: int, dst: int) -> list[int]:
    """Shortest src-dst path; ties broken toward lower neighbor ids."""
    if src == dst:
        return [src]
    parent = {src: -1}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for w in sorted(g.neighbors(u)):
            if w not in parent:
                parent[w] = u
                if w == dst:
                    path = [dst]
                    while path[-1] != src:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return path
                queue.append(w)
    raise ValueError(f"no path from {src} to {dst}")


def pair_via_paths(g: Graph, vertices, pairing_seed: int = 0) -> PathPairing:
    """Pair the given vertices within their components and connect each pair
    by a BFS shortest path.

    Pair order is a seeded shuffle.  One vertex per odd-sized component group
    is left unpaired and reported in residue.
    """
    todo = set(vertices)
    result = PathPairing()
    if not todo:
        return result
    comp_of: dict[int, int] = {}
    for idx, comp in enumerate(connected_components(g)):
        for v in comp:
            comp_of[v] = idx
    groups: dict[int, list[int]] = {}
    for v in sorted(todo):
        groups.setdefault(comp_of[v], []).append(v)
    rng = random.Random(pairing_seed)
    for cid in sorted(groups):
        group = groups[cid]
        rng.shuffle(group)
        if len(group) % 2 == 1:
            result.residue.append(group.pop())
        for i in range(0, len(group), 2):
            result.paths.append(_bfs_path(g, group[i], group[i + 1]))
    result.residue.sort()
    return result


def small_component_edges(g: Graph) -> EdgeSet:
    """All edges outside the largest connected component."""
    comps = connected_components(g)
    if len(comps) <= 1:
        return set()
    giant = set(comps[0])
    return {e for e in g.edges() if e[0] not in giant}


def euler_reduction(
    g: Graph,
    targets=None,
    pairing_seed: int = 0,
    augment: bool = False,
) -> EulerRepair:
    """Construct a repair edge set whose odd-degree vertices are exactly the
    target set (default: the odd-degree vertices of g, so that removing the
    repair leaves an Euler graph).

    Targets that cannot be paired inside their own component are returned in
    residue; the repair then fixes targets minus residue.
    """
    if targets is None:
        target_set = odd_vertices(g)
    else:
        target_set = set(targets)
        for v in target_set:
            if not 0 <= v < g.n:
                raise ValueError(f"target vertex {v} out of range")
        if len(target_set) % 2 == 1:
            raise ValueError("target set must have even cardinality")

    matching, leftover = greedy_odd_matching(g, target_set)
    if augment:
        _augment_length3(g, matching, leftover)
    pairing = pair_via_paths(g, leftover, pairing_seed)

    multiplicity: Counter = Counter()
    for e in matching:
        multiplicity[e] += 1
    for path in pairing.paths:
        for i in range(len(path) - 1):
            multiplicity[canonical_edge(path[i], path[i + 1])] += 1
    combined = {e for e, c in multiplicity.items() if c % 2 == 1}

    comps = connected_components(g)
    giant = set(comps[0]) if comps else set()
    tree_part = {e for e in combined if e[0] not in giant}

    max_len = max((len(p) - 1 for p in pairing.paths), default=0)
    stats = {
        "target_size": len(target_set),
        "matching_edges": len(matching),
        "path_count": len(pairing.paths),
        "path_edge_total": sum(len(p) - 1 for p in pairing.paths),
        "max_path_len": max_len,
        "tree_part_edges": len(tree_part),
        "repair_size": len(combined),
        "residue_size": len(pairing.residue),
    }
    return EulerRepair(
        edges=combined,
        matching_part=matching,
        path_part=pairing.paths,
        tree_part=tree_part,
        residue=pairing.residue,
        stats=stats,
    )
