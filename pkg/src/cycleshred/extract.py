"""Long-cycle stripping, Euler cycle peeling, cores, and expansion witnesses.

The long-cycle search is rotation-extension: grow a path greedily, rotate a
stuck endpoint along its path neighbors to expose new endpoints, and close
through the best available chord.  The peel is a cycle-popping walk that
prefers fresh vertices and closes as far back along its own stack as it can,
so the popped cycles stay long.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import deque
from dataclasses import dataclass, field

from .graph import Cycle, Graph, is_euler, odd_vertices


@dataclass
class StripResult:
    cycles: list = field(default_factory=list)
    lengths: list = field(default_factory=list)
    remainder: Graph | None = None
    rounds: int = 0
    exhausted: bool = False  # stopped on budget/search failure, not on the degree bound


def k_core(g: Graph, k: int) -> Graph:
    """Maximal subgraph with minimum degree >= k (same vertex id space;
    peeled vertices are left isolated).  May be empty."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = g.copy()
    if k == 0:
        return out
    queue = deque(v for v in range(out.n) if 0 < out.degree(v) < k)
    queued = bytearray(out.n)
    for v in queue:
        queued[v] = 1
    while queue:
        v = queue.popleft()
        for w in list(out.neighbors(v)):
            out.remove_edge(v, w)
            if not queued[w] and 0 < out.degree(w) < k:
                queued[w] = 1
                queue.append(w)
    return out


def average_degree(g: Graph) -> float:
    """2m over the number of non-isolated vertices (0.0 for an edgeless graph)."""
    active = sum(1 for v in range(g.n) if g.degree(v) > 0)
    return 2.0 * g.m / active if active else 0.0


class _PosaState:
    """One rotation-extension path search on a fixed graph."""

    __slots__ = ("g", "path", "on_path", "pos", "endpoints", "rotations", "rng")

    def __init__(self, g: Graph, start: int, rng: random.Random | None = None):
        self.g = g
        self.path = [start]
        self.on_path = bytearray(g.n)
        self.on_path[start] = 1
        self.pos = [0] * g.n
        self.endpoints = {start}
        self.rotations = 0
        self.rng = rng or random.Random(0)

    def extend(self) -> bool:
        path, on_path, pos, adj = self.path, self.on_path, self.pos, self.g._adj
        grew = False
        while True:
            end = path[-1]
            nxt = -1
            for w in adj[end]:
                if not on_path[w]:
                    nxt = w
                    break
            if nxt < 0:
                if grew:
                    # fresh path tail: previously tried endpoints are stale
                    self.endpoints = {end}
                return grew
            on_path[nxt] = 1
            pos[nxt] = len(path)
            path.append(nxt)
            grew = True

    def best_closure(self) -> tuple[int, int]:
        """(cycle length, path index) of the longest chord closure, or (0, -1)."""
        path, pos = self.path, self.pos
        end = path[-1]
        plen = len(path)
        best = plen  # best closure index, smaller is longer
        for w in self.g._adj[end]:
            if self.on_path[w]:
                i = pos[w]
                if i < best and i <= plen - 3:
                    best = i
        if best == plen:
            return 0, -1
        return plen - best, best

    def cycle_at(self, index: int) -> Cycle:
        return list(self.path[index:])

    def rotate(self) -> bool:
        """Reverse the tail at a random eligible chord to expose one unseen
        endpoint.  Random pivots explore globally; always picking the chord
        nearest the end traps the endpoint in a small suffix."""
        path, pos = self.path, self.pos
        end = path[-1]
        plen = len(path)
        candidates = []
        for w in self.g._adj[end]:
            if self.on_path[w]:
                i = pos[w]
                if i + 2 <= plen - 1 and path[i + 1] not in self.endpoints:
                    candidates.append(i)
        if not candidates:
            return False
        pick = candidates[0] if len(candidates) == 1 else self.rng.choice(candidates)
        tail = path[pick + 1 :]
        tail.reverse()
        path[pick + 1 :] = tail
        for j in range(pick + 1, plen):
            pos[path[j]] = j
        self.endpoints.add(path[-1])
        self.rotations += 1
        return True


def _crossing_closure(state: _PosaState, target: int) -> Cycle | None:
    """Close the whole path through a chord pair: a chord from the end to
    path[i] whose successor neighbors the path head closes everything in one
    reversal.  O(deg) per call versus thousands of blind rotations."""
    path, pos, g = state.path, state.pos, state.g
    plen = len(path)
    if plen < max(3, target):
        return None
    head_adj = g._adj[path[0]]
    end = path[-1]
    for w in g._adj[end]:
        if state.on_path[w]:
            i = pos[w]
            if i + 2 < plen and path[i + 1] in head_adj:
                return path[: i + 1] + path[i + 1 :][::-1]
    return None


def _search_from(
    g: Graph,
    start: int,
    target: int,
    floor: int,
    max_rotations: int,
    rng: random.Random | None = None,
) -> tuple[Cycle | None, Cycle | None, set[int]]:
    """Returns (cycle meeting target, best fallback cycle >= floor, endpoints)."""
    state = _PosaState(g, start, rng)
    best_cycle: Cycle | None = None
    best_len = 0
    while True:
        state.extend()
        length, index = state.best_closure()
        if length >= target:
            return state.cycle_at(index), None, state.endpoints
        crossing = _crossing_closure(state, target)
        if crossing is not None:
            return crossing, None, state.endpoints
        if length >= max(floor, best_len + 1):
            best_cycle = state.cycle_at(index)
            best_len = length
        if state.rotations >= max_rotations or not state.rotate():
            return None, best_cycle, state.endpoints


def find_long_cycle(
    g: Graph,
    target: int,
    *,
    floor: int = 3,
    max_rotations: int | None = None,
    restarts: int = 3,
    seed: int = 0,
) -> Cycle | None:
    """Search for a simple cycle of length >= target; fall back to the longest
    cycle of length >= floor the search saw.  None means nothing >= floor was
    found within budget (not a certificate of absence)."""
    if target < 3:
        raise ValueError("target must be at least 3")
    starts = [v for v in range(g.n) if g.degree(v) >= 2]
    if not starts:
        return None
    if max_rotations is None:
        max_rotations = 50 * g.n
    rng = random.Random(seed)
    best: Cycle | None = None
    for attempt in range(max(1, restarts)):
        start = starts[0] if attempt == 0 else rng.choice(starts)
        cycle, fallback, _ = _search_from(g, start, target, floor, max_rotations, rng)
        if cycle is not None:
            return cycle
        if fallback is not None and (best is None or len(fallback) > len(best)):
            best = fallback
    return best


def expansion_witness(
    g: Graph,
    t: int,
    *,
    seed: int = 0,
    subset_budget: int = 200_000,
) -> set[int] | None:
    """Look for a vertex set T with |T| <= t whose outside neighborhood has
    size at most 2|T|, after the cycle search for length >= 3t stalls.

    Returns None when a cycle of length >= 3t was found instead.  Any returned
    set is re-verified by direct neighborhood count before being returned.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    target = 3 * t
    cycle = find_long_cycle(g, target, floor=target, restarts=4, seed=seed)
    if cycle is not None:
        return None

    def valid(cand: tuple[int, ...]) -> bool:
        cand_set = set(cand)
        outside: set[int] = set()
        for v in cand:
            outside.update(g.neighbors(v))
        outside -= cand_set
        return len(outside) <= 2 * len(cand)

    order = sorted(range(g.n), key=lambda v: (g.degree(v), v))
    examined = 0
    for size in range(1, t + 1):
        for combo in itertools.combinations(order, size):
            examined += 1
            if examined > subset_budget:
                break
            if valid(combo):
                return set(combo)
        if examined > subset_budget:
            break

    # over budget: try the stalled search's endpoint set, then give up
    starts = [v for v in range(g.n) if g.degree(v) >= 2]
    if starts:
        _, _, endpoints = _search_from(
            g, starts[0], target, target, 50 * g.n, random.Random(seed)
        )
        if len(endpoints) <= t and valid(tuple(endpoints)):
            return set(endpoints)
    return None


def strip_long_cycles(
    h: Graph,
    stop_avg_deg: float = 84.0,
    *,
    min_accept: float = 1.0,
    target_fraction: float = 0.95,
    max_rotations: int | None = None,
    restarts: int = 3,
    max_rounds: int | None = None,
    seed: int = 0,
) -> StripResult:
    """Repeatedly remove a long cycle (searched inside the half-average-degree
    core) until the average degree drops to stop_avg_deg or the search fails.

    The attempt target each round is the average degree times log-squared of
    the vertex count, capped at target_fraction of the active vertices: chasing
    a perfectly spanning cycle costs an order of magnitude more rotations than
    settling for 95% of one.  Every removal strictly reduces the edge count, so
    the loop terminates; a failed round sets exhausted instead of producing an
    invalid result.
    """
    work = h.copy()
    result = StripResult()
    n0 = max(2, sum(1 for v in range(work.n) if work.degree(v) > 0))
    log2n0 = math.log(n0) ** 2
    while work.m > 0:
        if max_rounds is not None and result.rounds >= max_rounds:
            result.exhausted = True
            break
        d = average_degree(work)
        if d <= stop_avg_deg:
            break
        active = sum(1 for v in range(work.n) if work.degree(v) > 0)
        target = max(3, min(math.ceil(d * log2n0), int(target_fraction * active)))
        core_k = math.ceil(d / 2.0)
        min_active_deg = min(
            (work.degree(v) for v in range(work.n) if work.degree(v) > 0), default=0
        )
        search_g = work if min_active_deg >= core_k else k_core(work, core_k)
        if search_g.m == 0:
            search_g = work
        cycle = find_long_cycle(
            search_g,
            target,
            floor=max(3, math.floor(min_accept * d)),
            max_rotations=max_rotations,
            restarts=restarts,
            seed=seed + result.rounds,
        )
        if cycle is None:
            cycle = find_long_cycle(
                search_g, 3, floor=3, max_rotations=max_rotations, restarts=1,
                seed=seed + result.rounds,
            )
        if cycle is None and search_g is not work:
            cycle = find_long_cycle(
                work, 3, floor=3, max_rotations=max_rotations, restarts=1,
                seed=seed + result.rounds,
            )
        if cycle is None:
            result.exhausted = True
            break
        for i in range(len(cycle)):
            work.remove_edge(cycle[i], cycle[(i + 1) % len(cycle)])
        result.cycles.append(cycle)
        result.lengths.append(len(cycle))
        result.rounds += 1
    result.remainder = work
    return result


def peel_cycles(
    h: Graph,
    *,
    probe_cap: int = 256,
    rotations_per_stall: int = 16,
    rotation_budget: int | None = None,
    seed: int = 0,
) -> list[Cycle]:
    """Break an Euler graph into simple cycles covering every edge exactly once.

    Cycle-popping walk: step to an unvisited vertex when one is found among the
    first probe_cap unused neighbors.  A stalled endpoint is first rotated at a
    random stack chord (swapping the chord in and the broken walk edge back
    out) to expose a live endpoint; when rotations run out the walk closes at
    the scanned neighbor deepest down the stack, pops that cycle, restores the
    unused walk prefix, and starts over.
    """
    odd = odd_vertices(h)
    if odd:
        raise ValueError(f"graph is not Euler: vertex {min(odd)} has odd degree")
    work = h.copy()
    adj = work._adj
    cycles: list[Cycle] = []
    pos = [-1] * work.n
    start_scan = 0
    rot_total = 16 * work.n if rotation_budget is None else rotation_budget
    rng = random.Random(seed)
    while work.m > 0:
        while not adj[start_scan]:
            start_scan += 1
        stack = [start_scan]
        pos[start_scan] = 0
        rot_left = rotations_per_stall
        while stack:
            u = stack[-1]
            adj_u = adj[u]
            if not adj_u:
                # stuck: only legal with the whole walk consumed
                assert len(stack) == 1, "peel walk stalled mid-path on an Euler graph"
                pos[u] = -1
                stack.pop()
                continue
            nxt = -1
            best = len(stack)
            probes = 0
            for w in adj_u:
                p = pos[w]
                if p < 0:
                    nxt = w
                    break
                if p < best and p <= len(stack) - 3:
                    best = p
                probes += 1
                if probes >= probe_cap:
                    break
            if nxt >= 0:
                work.remove_edge(u, nxt)
                pos[nxt] = len(stack)
                stack.append(nxt)
                rot_left = rotations_per_stall
                continue
            if rot_left > 0 and rot_total > 0 and len(stack) >= 3:
                candidates = [
                    p for w in adj_u if 0 <= (p := pos[w]) <= len(stack) - 3
                ]
                if candidates:
                    pivot = candidates[0] if len(candidates) == 1 else rng.choice(candidates)
                    # swap: consume the chord, restore the broken walk edge
                    work.remove_edge(u, stack[pivot])
                    work.add_edge(stack[pivot], stack[pivot + 1])
                    tail = stack[pivot + 1 :]
                    tail.reverse()
                    stack[pivot + 1 :] = tail
                    for j in range(pivot + 1, len(stack)):
                        pos[stack[j]] = j
                    rot_left -= 1
                    rot_total -= 1
                    continue
            # the walk predecessor's edge is already consumed, so any scanned
            # neighbor is either fresh (handled above) or >= 2 steps back
            assert best < len(stack), "no closure available on an Euler graph"
            w = stack[best]
            work.remove_edge(u, w)
            cycles.append(stack[best:])
            for i in range(best):
                work.add_edge(stack[i], stack[i + 1])
            for v in stack:
                pos[v] = -1
            stack = []
            rot_left = rotations_per_stall
    return cycles


def count_short_cycles(cycles, threshold: int) -> int:
    """Number of cycles of length at most threshold."""
    return sum(1 for c in cycles if len(c) <= threshold)
