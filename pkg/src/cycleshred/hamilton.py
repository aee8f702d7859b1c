"""Extract many edge-disjoint Hamilton cycles by repeated rotation-extension.

The count target comes from the caller (typically half the minimum degree);
a failed search ends the pack early rather than compromising validity, and
the achieved count is reported for the caller to act on.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .graph import Cycle, Graph
from .extract import _search_from


@dataclass
class PackResult:
    cycles: list = field(default_factory=list)
    remainder: Graph | None = None
    attempts: int = 0
    stop_reason: str = ""  # target-reached | search-failed | budget


def find_hamilton_cycle(
    g: Graph,
    *,
    restarts: int = 5,
    max_rotations: int | None = None,
    seed: int = 0,
) -> Cycle | None:
    """Rotation-extension search for a cycle through every vertex.

    None means the budget ran out, not that no Hamilton cycle exists.
    """
    if g.n < 3:
        raise ValueError("need at least 3 vertices")
    if any(g.degree(v) < 2 for v in range(g.n)):
        return None
    budget = 100 * g.n if max_rotations is None else max_rotations
    rng = random.Random(seed)
    for attempt in range(max(1, restarts)):
        start = 0 if attempt == 0 else rng.randrange(g.n)
        cycle, _, _ = _search_from(g, start, g.n, g.n, budget, rng)
        if cycle is not None:
            return cycle
    return None


def pack_hamilton_cycles(
    g: Graph,
    target: int,
    *,
    restarts: int = 5,
    max_rotations: int | None = None,
    max_attempts: int | None = None,
    seed: int = 0,
) -> PackResult:
    """Pull edge-disjoint Hamilton cycles out of a working copy until the
    target count is reached, a search comes up empty, or the attempt budget
    runs out.  Achieved cycles are always valid regardless of the stop."""
    if target < 0:
        raise ValueError("target must be nonnegative")
    result = PackResult()
    work = g.copy()
    cap = max_attempts if max_attempts is not None else max(1, 2 * target)
    while len(result.cycles) < target:
        if result.attempts >= cap:
            result.stop_reason = "budget"
            break
        result.attempts += 1
        cycle = find_hamilton_cycle(
            work,
            restarts=restarts,
            max_rotations=max_rotations,
            seed=seed + result.attempts,
        )
        if cycle is None:
            result.stop_reason = "search-failed"
            break
        for i in range(len(cycle)):
            work.remove_edge(cycle[i], cycle[(i + 1) % len(cycle)])
        result.cycles.append(cycle)
    else:
        result.stop_reason = "target-reached"
    result.remainder = work
    return result
