"""Regime dispatch and end-to-end decomposition into cycles and single edges.

Every branch follows the same skeleton: make the graph Euler by paying a few
single edges, pull out long structure cheaply (Hamilton packs, long cycles,
matching closures), then peel what is left.  A repair-strip-peel safety net
runs last so the output is a valid decomposition for any input graph and any
configuration, on or off the random-graph happy path.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, fields

from .connect import (
    TaggedMatching,
    build_auxiliary_pairing,
    close_matching_into_cycles,
    edge_color,
    neighborhood_ratio,
    sparsify_split,
    split_avoiding_duplicates,
)
from .euler import euler_reduction
from .extract import average_degree, peel_cycles, strip_long_cycles
from .gen import SplitSpec, derive_seed, split
from .graph import Decomposition, Graph, cycle_edges, is_euler, odd_vertices
from .hamilton import pack_hamilton_cycles
from .verify import lower_bound

SPARSE, INTERMEDIATE, DENSE = "sparse", "intermediate", "dense"


@dataclass
class PipelineConfig:
    """Every analytic constant of the pipeline, seedable and overridable.

    Split probabilities and regime thresholds are computed from the observed
    graph via the fixed formulas (2 log^5 n / np and friends) and clamped to
    [0, 1]; the split_p* fields force explicit values instead, which is how
    the dense machinery gets exercised at small n where the formulas saturate.
    """

    seed: int = 0
    sparse_log_power: float = 10.0
    dense_exponent: float = -1.0 / 6.0
    split_p1: float | None = None
    split_p2: float | None = None
    split_p3: float | None = None
    stop_avg_deg: float = 84.0
    min_accept: float = 1.0
    strip_target_fraction: float = 0.95
    strip_rotations_per_n: int = 50
    strip_restarts: int = 3
    peel_probe_cap: int = 256
    peel_rotations_per_stall: int = 16
    peel_rotation_budget_per_n: int = 16
    ham_restarts: int = 5
    ham_rotations_per_n: int = 100
    connector_retries: int = 3
    connector_path_len: int | None = None
    capacity_fraction: float = 0.125
    v0_degree_coeff: float = 0.5
    group_cap: int | None = None
    max_repair_rounds: int = 2

    def replace(self, **overrides) -> "PipelineConfig":
        data = self.to_dict()
        data.update(overrides)
        return PipelineConfig.from_dict(data)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)


@dataclass
class RunReport:
    regime: str
    n: int
    m: int
    odd_count: int
    lower_bound: int
    seed: int
    piece_count: int = 0
    pieces_by_provenance: dict = field(default_factory=dict)
    repair_edge_count: int = 0
    hamilton_target: int = 0
    hamilton_achieved: int = 0
    connector_failures: int = 0
    connector_ratios: list = field(default_factory=list)
    stage_log: list = field(default_factory=list)  # [stage, edges_before, edges_after, pieces_added]
    wall_time_s: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "regime": self.regime,
            "n": self.n,
            "m": self.m,
            "odd": self.odd_count,
            "lower_bound": self.lower_bound,
            "seed": self.seed,
            "piece_count": self.piece_count,
            "pieces_by_provenance": dict(self.pieces_by_provenance),
            "repair_edge_count": self.repair_edge_count,
            "hamilton_target": self.hamilton_target,
            "hamilton_achieved": self.hamilton_achieved,
            "connector_failures": self.connector_failures,
            "connector_ratios": list(self.connector_ratios),
            "stage_log": [list(row) for row in self.stage_log],
            "wall_time_s": self.wall_time_s,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)


class _Run:
    """Working state for one decomposition: the undecomposed edge pool, the
    growing decomposition, and the report."""

    def __init__(self, g: Graph, cfg: PipelineConfig, regime: str):
        self.cfg = cfg
        self.work = g.copy()
        self.decomp = Decomposition(n=g.n)
        self.report = RunReport(
            regime=regime,
            n=g.n,
            m=g.m,
            odd_count=len(odd_vertices(g)),
            lower_bound=lower_bound(g),
            seed=cfg.seed,
        )
        self._t0 = time.perf_counter()

    def log_stage(self, stage: str, edges_before: int, pieces_added: int) -> None:
        self.report.stage_log.append([stage, edges_before, self.work.m, pieces_added])

    def emit_singles(self, edges, stage: str) -> int:
        count = 0
        for e in sorted(edges):
            self.work.remove_edge(*e)
            self.decomp.add_edge(e, stage)
            count += 1
        return count

    def emit_cycles(self, cycles, stage: str) -> int:
        for cycle in cycles:
            for e in cycle_edges(cycle):
                self.work.remove_edge(*e)
            self.decomp.add_cycle(cycle, stage)
        return len(cycles)

    def repair(self, stage_salt: int) -> None:
        before = self.work.m
        fix = euler_reduction(
            self.work, pairing_seed=derive_seed(self.cfg.seed, 17, stage_salt)
        )
        self.report.repair_edge_count += len(fix.edges)
        added = self.emit_singles(fix.edges, "euler-repair")
        self.log_stage("euler-repair", before, added)

    def strip(self) -> None:
        cfg = self.cfg
        before = self.work.m
        res = strip_long_cycles(
            self.work,
            cfg.stop_avg_deg,
            min_accept=cfg.min_accept,
            target_fraction=cfg.strip_target_fraction,
            max_rotations=cfg.strip_rotations_per_n * max(1, self.work.n),
            restarts=cfg.strip_restarts,
            seed=derive_seed(cfg.seed, 23),
        )
        added = self.emit_cycles(res.cycles, "long-cycle")
        self.log_stage("long-cycle", before, added)

    def peel(self) -> None:
        cfg = self.cfg
        before = self.work.m
        cycles = peel_cycles(
            self.work,
            probe_cap=cfg.peel_probe_cap,
            rotations_per_stall=cfg.peel_rotations_per_stall,
            rotation_budget=cfg.peel_rotation_budget_per_n * max(1, self.work.n),
            seed=derive_seed(cfg.seed, 19),
        )
        added = self.emit_cycles(cycles, "peel")
        self.log_stage("peel", before, added)

    def finish(self) -> tuple[Decomposition, RunReport]:
        """Safety net: repair parity if needed, strip if still dense, peel the
        Euler rest; emit stragglers as single edges after the repair budget."""
        rounds = 0
        while self.work.m > 0:
            if not is_euler(self.work):
                if rounds >= self.cfg.max_repair_rounds:
                    before = self.work.m
                    added = self.emit_singles(list(self.work.edges()), "leftover-edge")
                    self.log_stage("leftover-edge", before, added)
                    break
                rounds += 1
                self.repair(stage_salt=100 + rounds)
                continue
            if average_degree(self.work) > self.cfg.stop_avg_deg:
                self.strip()
            self.peel()
        self.report.piece_count = self.decomp.piece_count
        self.report.pieces_by_provenance = self.decomp.stage_counts()
        self.report.wall_time_s = round(time.perf_counter() - self._t0, 6)
        return self.decomp, self.report


def _log_powers(n: int) -> float:
    return math.log(max(n, 2))


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def _split_probs(cfg: PipelineConfig, n: int, avg_deg: float, dense: bool) -> list[float]:
    """Formula-driven split probabilities, clamped sequentially so a saturated
    early part simply takes everything."""
    ln = _log_powers(n)
    np_obs = max(avg_deg, 1e-9)
    p1 = cfg.split_p1 if cfg.split_p1 is not None else 2.0 * ln**5 / np_obs
    probs = [_clamp01(p1)]
    budget = 1.0 - probs[0]
    if dense:
        p2 = cfg.split_p2 if cfg.split_p2 is not None else n ** (4.0 / 5.0) * ln**3 / np_obs
        probs.append(min(_clamp01(p2), budget))
        budget -= probs[-1]
        p3 = cfg.split_p3 if cfg.split_p3 is not None else ln**2 / np_obs
        probs.append(min(_clamp01(p3), budget))
    else:
        p2 = cfg.split_p2 if cfg.split_p2 is not None else ln**2 / np_obs
        probs.append(min(_clamp01(p2), budget))
    return probs


def _union_graph(n: int, parts, minus=frozenset()) -> Graph:
    out = Graph(n)
    for g in parts:
        for u, v in g.edges():
            if (u, v) not in minus:
                out.add_edge(u, v)
    return out


def _closure_batches(run: _Run, h0: Graph, connector: Graph) -> None:
    """Break the bounded-degree remainder into matchings (hub edges through the
    auxiliary pairing) and close each batch into cycles using disjoint random
    slices of the connector graph."""
    cfg = run.cfg
    n = h0.n
    ln = _log_powers(n)
    # the log^2 n / 2 hub threshold sits below the strip stop at small n,
    # which would make nearly every vertex a hub; the stop degree is the floor
    hub_cut = max(cfg.v0_degree_coeff * ln**2, cfg.stop_avg_deg + 1.0)
    hubs = {v for v in range(n) if h0.degree(v) >= hub_cut}

    low = Graph(n)
    for u, v in h0.edges():
        if u not in hubs and v not in hubs:
            low.add_edge(u, v)
    batches = [m for m in edge_color(low) if len(m)]
    aux_classes, _aux_leftover = build_auxiliary_pairing(h0, hubs)
    for cls in aux_classes:
        for grp in split_avoiding_duplicates(cls, cfg.group_cap):
            if len(grp):
                batches.append(grp)
    # every batch costs a slice of the connector; serve the biggest matchings
    # and leave the rest in the pool rather than route through starved slices
    max_batches = connector.m // (4 * max(1, n))
    batches.sort(key=len, reverse=True)
    batches = batches[:max_batches]
    if not batches:
        return

    before = run.work.m
    added = 0
    parts = (
        split(
            connector,
            SplitSpec(*([1.0 / len(batches)] * (len(batches) - 1))),
            derive_seed(cfg.seed, 29),
        )
        if len(batches) > 1
        else [connector]
    )
    for i, batch in enumerate(batches):
        gc = parts[i]
        avg_c = average_degree(gc)
        cap_pairs = max(8, int(cfg.capacity_fraction * n * math.log(max(avg_c, 2.0)) / ln))
        ksub = max(1, math.ceil(len(batch) / cap_pairs))
        for j, (gc_sub, m_sub) in enumerate(
            sparsify_split(gc, batch, ksub, derive_seed(cfg.seed, 31, i))
        ):
            if not len(m_sub):
                continue
            run.report.connector_ratios.append(
                round(neighborhood_ratio(gc_sub, m_sub.endpoints()), 6)
            )
            closure = close_matching_into_cycles(
                gc_sub,
                m_sub,
                max_path_len=cfg.connector_path_len,
                retries=cfg.connector_retries,
                seed=derive_seed(cfg.seed, 37, i, j),
            )
            run.report.connector_failures += len(closure.failed_entries)
            # failed matching edges stay in the pool for the final stages
            added += run.emit_cycles(closure.cycles, "matching-closure")
    run.log_stage("matching-closure", before, added)


def decompose_sparse(g: Graph, cfg: PipelineConfig | None = None):
    """Repair parity, strip long cycles to the stop degree, peel the rest."""
    cfg = cfg or PipelineConfig()
    run = _Run(g, cfg, SPARSE)
    if run.work.m == 0:
        return run.finish()
    run.repair(stage_salt=1)
    run.strip()
    return run.finish()


def decompose_intermediate(g: Graph, cfg: PipelineConfig | None = None):
    """Three-way split: repair out of the second part, strip the heavy rest,
    close its matchings through slices of the first part, peel what remains."""
    cfg = cfg or PipelineConfig()
    run = _Run(g, cfg, INTERMEDIATE)
    if run.work.m == 0:
        return run.finish()
    probs = _split_probs(cfg, g.n, average_degree(run.work), dense=False)
    g1, g2, g3 = split(run.work, SplitSpec(*probs), derive_seed(cfg.seed, 41))

    targets = odd_vertices(run.work)
    before = run.work.m
    fix = euler_reduction(
        g2, targets=targets, pairing_seed=derive_seed(cfg.seed, 43)
    )
    run.report.repair_edge_count += len(fix.edges)
    added = run.emit_singles(fix.edges, "euler-repair")
    run.log_stage("euler-repair", before, added)

    heavy = _union_graph(g.n, [g2, g3], minus=fix.edges)
    before = run.work.m
    res = strip_long_cycles(
        heavy,
        cfg.stop_avg_deg,
        min_accept=cfg.min_accept,
        target_fraction=cfg.strip_target_fraction,
        max_rotations=cfg.strip_rotations_per_n * max(1, g.n),
        restarts=cfg.strip_restarts,
        seed=derive_seed(cfg.seed, 47),
    )
    added = run.emit_cycles(res.cycles, "long-cycle")
    run.log_stage("long-cycle", before, added)

    _closure_batches(run, res.remainder, g1)
    return run.finish()


def decompose_dense(g: Graph, cfg: PipelineConfig | None = None):
    """Four-way split: repair out of the third part, pack Hamilton cycles from
    the bulk, close the leftover matchings through the second part, then hand
    the rest to the sparse machinery."""
    cfg = cfg or PipelineConfig()
    run = _Run(g, cfg, DENSE)
    if run.work.m == 0:
        return run.finish()
    avg = average_degree(run.work)
    probs = _split_probs(cfg, g.n, avg, dense=True)
    g1, g2, g3, g4 = split(run.work, SplitSpec(*probs), derive_seed(cfg.seed, 53))

    targets = odd_vertices(run.work)
    before = run.work.m
    fix = euler_reduction(
        g3, targets=targets, pairing_seed=derive_seed(cfg.seed, 59)
    )
    run.report.repair_edge_count += len(fix.edges)
    added = run.emit_singles(fix.edges, "euler-repair")
    run.log_stage("euler-repair", before, added)

    p4 = 1.0 - sum(probs)
    target = 0
    if g4.m > 0 and g4.n >= 3:
        delta4 = min(g4.degree(v) for v in range(g4.n))
        base = min(avg * p4, float(delta4))
        target = max(0, math.floor((base - g.n ** 0.6) / 2.0))
    before = run.work.m
    pack = pack_hamilton_cycles(
        g4,
        target,
        restarts=cfg.ham_restarts,
        max_rotations=cfg.ham_rotations_per_n * max(1, g.n),
        seed=derive_seed(cfg.seed, 61),
    )
    run.report.hamilton_target = target
    run.report.hamilton_achieved = len(pack.cycles)
    added = run.emit_cycles(pack.cycles, "hamilton")
    run.log_stage("hamilton", before, added)

    h0 = _union_graph(g.n, [g3, pack.remainder], minus=fix.edges)
    if average_degree(h0) > cfg.stop_avg_deg:
        before = run.work.m
        res = strip_long_cycles(
            h0,
            cfg.stop_avg_deg,
            min_accept=cfg.min_accept,
            target_fraction=cfg.strip_target_fraction,
            max_rotations=cfg.strip_rotations_per_n * max(1, g.n),
            restarts=cfg.strip_restarts,
            seed=derive_seed(cfg.seed, 67),
        )
        added = run.emit_cycles(res.cycles, "long-cycle")
        run.log_stage("long-cycle", before, added)
        h0 = res.remainder

    _closure_batches(run, h0, g2)

    # remaining pool: first part, unused connector slices, stragglers.  When
    # the split saturated (formulas > 1 at small n) the pool holds the bulk of
    # the graph, so absorb it with Hamilton cycles before peeling: a packed
    # cycle covers n edges, the most any piece can.
    if run.work.m and not is_euler(run.work):
        run.repair(stage_salt=71)
    if run.work.m and g.n >= 3:
        delta = min(run.work.degree(v) for v in range(g.n))
        pool_target = delta // 2
        if pool_target > 0:
            before = run.work.m
            pool_pack = pack_hamilton_cycles(
                run.work,
                pool_target,
                restarts=cfg.ham_restarts,
                max_rotations=cfg.ham_rotations_per_n * max(1, g.n),
                seed=derive_seed(cfg.seed, 73),
            )
            run.report.hamilton_target += pool_target
            run.report.hamilton_achieved += len(pool_pack.cycles)
            added = run.emit_cycles(pool_pack.cycles, "hamilton")
            run.log_stage("hamilton", before, added)
    return run.finish()


def decompose(
    g: Graph, p_hint: float | None = None, cfg: PipelineConfig | None = None
):
    """Decompose any graph; the density (or the caller's hint) picks the
    regime, and the choice only affects piece counts, never validity."""
    cfg = cfg or PipelineConfig()
    n = g.n
    if n < 2 or g.m == 0:
        return _Run(g, cfg, SPARSE).finish()
    density = p_hint if p_hint is not None else 2.0 * g.m / (n * (n - 1))
    ln = _log_powers(n)
    sparse_hi = ln**cfg.sparse_log_power / n
    mid_hi = n**cfg.dense_exponent
    if density > mid_hi:
        return decompose_dense(g, cfg)
    if density <= sparse_hi:
        return decompose_sparse(g, cfg)
    return decompose_intermediate(g, cfg)
