"""Independent decomposition checking, the exact counting lower bound, and
Monte-Carlo probes of random-graph structure.

The verifier rebuilds everything it needs from the raw edge list and the
decomposition's own data; it never calls into the construction pipeline.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from collections import deque
from dataclasses import dataclass, field

from .gen import derive_seed, gnp
from .graph import Decomposition, Graph


@dataclass
class VerifyReport:
    valid: bool
    piece_count: int
    covered_edges: int
    duplicate_edges: list = field(default_factory=list)
    missing_edges: list = field(default_factory=list)
    bad_cycles: list = field(default_factory=list)  # (cycle index, reason)
    bad_edges: list = field(default_factory=list)  # (edge index, reason)

    def to_json_dict(self) -> dict:
        return {
            "valid": self.valid,
            "piece_count": self.piece_count,
            "covered_edges": self.covered_edges,
            "duplicate_edges": [list(e) for e in self.duplicate_edges],
            "missing_edges": [list(e) for e in self.missing_edges],
            "bad_cycles": [[i, reason] for i, reason in self.bad_cycles],
            "bad_edges": [[i, reason] for i, reason in self.bad_edges],
        }


def verify_decomposition(g: Graph, d: Decomposition) -> VerifyReport:
    """Check that the pieces are simple cycles and single edges of g, pairwise
    edge-disjoint, covering every edge exactly once.  Defects are reported,
    never raised."""
    host_edges = set()
    for u in range(g.n):
        for v in g._adj[u]:
            if u < v:
                host_edges.add((u, v))

    covered = set()
    duplicates = []
    bad_cycles = []
    bad_edges = []

    for idx, cycle in enumerate(d.cycles):
        if len(cycle) < 3:
            bad_cycles.append((idx, "shorter than 3"))
            continue
        if len(set(cycle)) != len(cycle):
            bad_cycles.append((idx, "repeats a vertex"))
            continue
        if any(not 0 <= v < g.n for v in cycle):
            bad_cycles.append((idx, "vertex out of range"))
            continue
        ok = True
        for i in range(len(cycle)):
            a, b = cycle[i], cycle[(i + 1) % len(cycle)]
            e = (a, b) if a < b else (b, a)
            if e not in host_edges:
                bad_cycles.append((idx, f"edge {e} not in graph"))
                ok = False
                break
            if e in covered:
                duplicates.append(e)
                ok = False
                break
            covered.add(e)
        if not ok:
            continue

    for idx, (u, v) in enumerate(d.single_edges):
        e = (u, v) if u < v else (v, u)
        if e[0] == e[1] or not (0 <= e[0] < g.n and 0 <= e[1] < g.n):
            bad_edges.append((idx, "malformed edge"))
            continue
        if e not in host_edges:
            bad_edges.append((idx, f"edge {e} not in graph"))
            continue
        if e in covered:
            duplicates.append(e)
            continue
        covered.add(e)

    missing = sorted(host_edges - covered)
    valid = (
        not duplicates
        and not missing
        and not bad_cycles
        and not bad_edges
        and len(covered) == len(host_edges)
    )
    return VerifyReport(
        valid=valid,
        piece_count=d.piece_count,
        covered_edges=len(covered),
        duplicate_edges=duplicates,
        missing_edges=missing,
        bad_cycles=bad_cycles,
        bad_edges=bad_edges,
    )


def lower_bound(g: Graph) -> int:
    """No valid decomposition has fewer pieces: every odd vertex forces a
    single edge and no cycle covers more than n edges."""
    odd = sum(1 for v in range(g.n) if g.degree(v) % 2 == 1)
    base = odd // 2
    rest = g.m - base
    if rest <= 0 or g.n == 0:
        return base
    return base + math.ceil(rest / g.n)


@dataclass
class ProbeStats:
    n: int
    p: float
    trials: int
    seed: int
    detail: bool
    odd_fraction: list = field(default_factory=list)
    giant_coverage: list = field(default_factory=list)
    low_odd_neighbor_count: list = field(default_factory=list)
    short_cycle_count: list = field(default_factory=list)  # detail only
    short_cycle_threshold: int = 3
    max_set_density_ratio: list = field(default_factory=list)  # detail only
    independence_lb_estimate: list = field(default_factory=list)  # detail only
    diameter_estimate: list = field(default_factory=list)  # detail only
    estimate_flags: dict = field(default_factory=dict)

    def summary(self) -> dict:
        out = {
            "n": self.n,
            "p": self.p,
            "trials": self.trials,
            "seed": self.seed,
            "detail": self.detail,
            "short_cycle_threshold": self.short_cycle_threshold,
            "estimate_flags": self.estimate_flags,
        }
        for name in (
            "odd_fraction",
            "giant_coverage",
            "low_odd_neighbor_count",
            "short_cycle_count",
            "max_set_density_ratio",
            "independence_lb_estimate",
            "diameter_estimate",
        ):
            values = getattr(self, name)
            if not values:
                continue
            q = statistics.quantiles(values, n=4) if len(values) >= 2 else [values[0]] * 3
            out[name] = {
                "mean": statistics.fmean(values),
                "stddev": statistics.pstdev(values),
                "min": min(values),
                "q1": q[0],
                "median": q[1],
                "q3": q[2],
                "max": max(values),
            }
        return out

    CSV_FIELDS = (
        "trial",
        "seed",
        "n",
        "p",
        "m",
        "odd_fraction",
        "giant_coverage",
        "low_odd_neighbor_count",
        "short_cycle_count",
        "max_set_density_ratio",
        "independence_lb_estimate",
        "diameter_estimate",
    )

    def __post_init__(self):
        self._rows: list[dict] = []

    def add_row(self, row: dict) -> None:
        self._rows.append(row)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=self.CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in self._rows:
            writer.writerow(row)
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True, indent=2)


def _giant_coverage(g: Graph) -> float:
    seen = bytearray(g.n)
    best = 0
    for s in range(g.n):
        if seen[s] or g.degree(s) == 0:
            continue
        seen[s] = 1
        size = 1
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g._adj[u]:
                if not seen[w]:
                    seen[w] = 1
                    size += 1
                    queue.append(w)
        best = max(best, size)
    return best / g.n if g.n else 0.0


def _count_low_odd_neighbor_vertices(g: Graph, cutoff: float) -> int:
    odd = [g.degree(v) % 2 == 1 for v in range(g.n)]
    low = 0
    for v in range(g.n):
        if g.degree(v) == 0:
            low += 1 if cutoff > 0 else 0
            continue
        odd_nbrs = sum(1 for w in g._adj[v] if odd[w])
        if odd_nbrs < cutoff:
            low += 1
    return low


def _triangle_count(g: Graph) -> int:
    count = 0
    neighbor_sets = [set(g._adj[v]) for v in range(g.n)]
    for u in range(g.n):
        for v in g._adj[u]:
            if u < v:
                count += sum(1 for w in neighbor_sets[u] & neighbor_sets[v] if w > v)
    return count


def _short_cycle_count(g: Graph, threshold: int) -> int:
    # exact triangle count; 4-cycles added when the threshold asks for them
    total = _triangle_count(g) if threshold >= 3 else 0
    if threshold >= 4:
        # each 4-cycle is counted once per diagonal pair
        c4 = 0
        neighbor_sets = [set(g._adj[v]) for v in range(g.n)]
        for u in range(g.n):
            for v in range(u + 1, g.n):
                common = len(neighbor_sets[u] & neighbor_sets[v])
                c4 += common * (common - 1) // 2
        total += c4 // 2
    return total


def _sampled_density_ratio(g: Graph, seed: int, samples: int = 12, max_size: int = 8) -> float:
    import random as _random

    rng = _random.Random(seed)
    active = [v for v in range(g.n) if g.degree(v) > 0]
    if not active:
        return 0.0
    best = 0.0
    neighbor_sets = g._adj
    for _ in range(samples):
        current = {rng.choice(active)}
        edges_inside = 0
        while len(current) < max_size:
            candidates = set()
            for v in current:
                candidates.update(neighbor_sets[v])
            candidates -= current
            if not candidates:
                break
            gain, pick = -1, -1
            for c in candidates:
                inside = sum(1 for w in neighbor_sets[c] if w in current)
                if inside > gain:
                    gain, pick = inside, c
            current.add(pick)
            edges_inside += gain
            if len(current) >= 3:
                best = max(best, edges_inside / len(current))
    return best


def _greedy_independent_set(g: Graph) -> int:
    order = sorted(range(g.n), key=lambda v: (g.degree(v), v))
    chosen: set[int] = set()
    banned = bytearray(g.n)
    for v in order:
        if banned[v]:
            continue
        chosen.add(v)
        banned[v] = 1
        for w in g._adj[v]:
            banned[w] = 1
    return len(chosen)


def _double_sweep_diameter(g: Graph, start: int) -> int:
    def bfs_far(s: int) -> tuple[int, int]:
        dist = {s: 0}
        queue = deque([s])
        far, fard = s, 0
        while queue:
            u = queue.popleft()
            for w in g._adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    if dist[w] > fard:
                        far, fard = w, dist[w]
                    queue.append(w)
        return far, fard

    far, _ = bfs_far(start)
    _, d = bfs_far(far)
    return d


def probe_properties(
    n: int, p: float, trials: int, seed: int, *, detail: bool = False
) -> ProbeStats:
    """Measure odd-degree fraction, giant-component coverage, and odd-neighbor
    counts per trial; detail mode adds short-cycle counts, sampled small-set
    density, and flagged independence/diameter estimates."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    threshold = max(3, math.ceil(math.log(max(math.log(max(n, 3)), 1.01))))
    stats = ProbeStats(n=n, p=p, trials=trials, seed=seed, detail=detail)
    stats.short_cycle_threshold = threshold
    stats.estimate_flags = {
        "independence_lb_estimate": "greedy lower bound",
        "diameter_estimate": "double-sweep BFS on the giant",
        "max_set_density_ratio": "sampled local search",
    }
    cutoff = n * p / 5.0
    for t in range(trials):
        trial_seed = derive_seed(seed, 1000 + t)
        g = gnp(n, p, trial_seed)
        odd_frac = sum(1 for v in range(n) if g.degree(v) % 2 == 1) / n
        coverage = _giant_coverage(g)
        low_odd = _count_low_odd_neighbor_vertices(g, cutoff)
        stats.odd_fraction.append(odd_frac)
        stats.giant_coverage.append(coverage)
        stats.low_odd_neighbor_count.append(low_odd)
        row = {
            "trial": t,
            "seed": trial_seed,
            "n": n,
            "p": p,
            "m": g.m,
            "odd_fraction": f"{odd_frac:.6f}",
            "giant_coverage": f"{coverage:.6f}",
            "low_odd_neighbor_count": low_odd,
            "short_cycle_count": "",
            "max_set_density_ratio": "",
            "independence_lb_estimate": "",
            "diameter_estimate": "",
        }
        if detail:
            short = _short_cycle_count(g, threshold)
            density = _sampled_density_ratio(g, trial_seed)
            indep = _greedy_independent_set(g)
            active = [v for v in range(n) if g.degree(v) > 0]
            diam = _double_sweep_diameter(g, active[0]) if active else 0
            stats.short_cycle_count.append(short)
            stats.max_set_density_ratio.append(density)
            stats.independence_lb_estimate.append(indep)
            stats.diameter_estimate.append(diam)
            row.update(
                short_cycle_count=short,
                max_set_density_ratio=f"{density:.6f}",
                independence_lb_estimate=indep,
                diameter_estimate=diam,
            )
        stats.add_row(row)
    return stats
