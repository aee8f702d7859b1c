"""Seeded random-graph generation and independent edge splitting.

Two fixed generators (documented in the README):

* gnp uses numpy's counter-based Philox keyed by the seed, sampling edges by
  geometric gap-skipping over the lexicographic edge enumeration, so the
  expected cost is O(m) rather than O(n^2).
* split decides each edge from a SplitMix64 hash of (seed, edge id), so the
  assignment is order-independent and identical no matter how the edges are
  visited.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph

SUM_SLACK = 1e-12

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@dataclass(frozen=True)
class SplitSpec:
    """Probabilities p_1..p_k for the first k parts; the rest is part k+1."""

    probs: tuple

    def __init__(self, *probs: float):
        object.__setattr__(self, "probs", tuple(float(p) for p in probs))
        for p in self.probs:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"split probability {p} outside [0, 1]")
        if sum(self.probs) > 1.0 + SUM_SLACK:
            raise ValueError(f"split probabilities sum to {sum(self.probs)} > 1")

    @property
    def parts(self) -> int:
        return len(self.probs) + 1


def splitmix64(values: np.ndarray, seed: int) -> np.ndarray:
    """SplitMix64 finalizer over uint64 values, keyed by seed."""
    with np.errstate(over="ignore"):
        z = values.astype(np.uint64) + np.uint64((seed * 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF) + _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        z = z ^ (z >> np.uint64(31))
    return z


def hash_unit(values: np.ndarray, seed: int) -> np.ndarray:
    """Map uint64 values to deterministic uniforms in [0, 1)."""
    return (splitmix64(values, seed) >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


def derive_seed(seed: int, *salts: int) -> int:
    """Derive an independent 63-bit stream seed from (seed, salts)."""
    acc = seed & 0xFFFFFFFFFFFFFFFF
    for s in salts:
        acc = int(splitmix64(np.array([s & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64), acc)[0])
    return acc & 0x7FFFFFFFFFFFFFFF


def edge_ids(us: np.ndarray, vs: np.ndarray, n: int) -> np.ndarray:
    """Lexicographic rank of canonical edges (u < v) among the C(n,2) pairs."""
    u = us.astype(np.uint64)
    v = vs.astype(np.uint64)
    nn = np.uint64(n)
    return u * nn - (u * (u + np.uint64(1))) // np.uint64(2) + (v - u - np.uint64(1))


def _ids_to_edges(ids: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # invert the triangular rank; float solve then exact integer correction
    idx = ids.astype(np.float64)
    b = 2 * n - 1
    u = np.floor((b - np.sqrt(b * b - 8.0 * idx)) / 2.0).astype(np.int64)
    u = np.clip(u, 0, n - 2)
    offset = u * (2 * n - u - 1) // 2
    too_high = offset > ids
    while np.any(too_high):
        u[too_high] -= 1
        offset = u * (2 * n - u - 1) // 2
        too_high = offset > ids
    next_offset = (u + 1) * (2 * n - u - 2) // 2
    too_low = next_offset <= ids
    while np.any(too_low):
        u[too_low] += 1
        offset = u * (2 * n - u - 1) // 2
        next_offset = (u + 1) * (2 * n - u - 2) // 2
        too_low = next_offset <= ids
    v = ids - offset + u + 1
    return u, v


def _graph_from_arrays(n: int, us, vs) -> Graph:
    g = Graph(n)
    adj = g._adj
    for u, v in zip(us.tolist(), vs.tolist()):
        adj[u][v] = None
        adj[v][u] = None
    g._m = len(us)
    return g


def gnp(n: int, p: float, seed: int) -> Graph:
    """Sample G(n, p): each of the C(n,2) edges present independently.

    Deterministic for a given (n, p, seed) across platforms.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    total = n * (n - 1) // 2
    if p == 0.0 or total == 0:
        return Graph(n)
    if p == 1.0:
        ids = np.arange(total, dtype=np.int64)
        us, vs = _ids_to_edges(ids, n)
        return _graph_from_arrays(n, us, vs)

    rng = np.random.Generator(np.random.Philox(key=seed & 0xFFFFFFFFFFFFFFFF))
    batch = max(1024, int(1.1 * total * p) + 64)
    positions: list[np.ndarray] = []
    pos = -1
    while pos < total - 1:
        gaps = rng.geometric(p, size=batch).astype(np.int64)
        cand = pos + np.cumsum(gaps)
        keep = cand[cand < total]
        positions.append(keep)
        if len(keep) < len(cand):
            break
        pos = int(cand[-1])
    ids = np.concatenate(positions) if positions else np.empty(0, dtype=np.int64)
    us, vs = _ids_to_edges(ids, n)
    return _graph_from_arrays(n, us, vs)


def split(g: Graph, spec: SplitSpec, seed: int) -> list[Graph]:
    """Partition the edges of g into len(spec.probs)+1 edge-disjoint graphs.

    Each edge lands in part i with probability spec.probs[i], independently,
    decided by a hash of (seed, edge id): deleting edges from one part can
    never change another.
    """
    k = spec.parts
    parts = [Graph(g.n) for _ in range(k)]
    if g.m == 0:
        return parts
    edges = list(g.edges())
    us = np.fromiter((e[0] for e in edges), dtype=np.int64, count=len(edges))
    vs = np.fromiter((e[1] for e in edges), dtype=np.int64, count=len(edges))
    r = hash_unit(edge_ids(us, vs, g.n), seed)
    cuts = np.cumsum(np.asarray(spec.probs, dtype=np.float64))
    assignment = np.searchsorted(cuts, r, side="right")
    for (u, v), part in zip(edges, assignment.tolist()):
        parts[part].add_edge(u, v)
    return parts


def odd_parity_probability(n: int, p: float) -> float:
    """P(Bin(n, p) is odd) in closed form: (1 - (1 - 2p)^n) / 2."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    return (1.0 - (1.0 - 2.0 * p) ** n) / 2.0
