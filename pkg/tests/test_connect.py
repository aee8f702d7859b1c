import math
import random

import pytest

from cycleshred.connect import (
    PairRequest,
    TaggedMatching,
    build_auxiliary_pairing,
    close_matching_into_cycles,
    connect_pairs,
    edge_color,
    neighborhood_ratio,
    sparsify_split,
    split_avoiding_duplicates,
)
from cycleshred.gen import gnp
from cycleshred.graph import Graph, canonical_edge
from conftest import complete_graph, cycle_graph, star_graph


def assert_proper_matching(m: TaggedMatching):
    seen = set()
    for u, v in m.edges:
        assert u not in seen and v not in seen
        seen.add(u)
        seen.add(v)


def test_edge_color_matching_input():
    g = Graph(6, [(0, 1), (2, 3), (4, 5)])
    classes = edge_color(g)
    assert len(classes) == 1 and len(classes[0]) == 3


def test_edge_color_c4():
    classes = edge_color(cycle_graph(4))
    assert len(classes) == 2
    assert all(len(c) == 2 for c in classes)


def test_edge_color_k4_partition():
    k4 = complete_graph(4)
    classes = edge_color(k4)
    assert len(classes) <= 2 * 3 - 1
    covered = [e for c in classes for e in c.edges]
    assert sorted(covered) == sorted(k4.edges())
    for c in classes:
        assert_proper_matching(c)


def test_edge_color_random_partition():
    g = gnp(80, 0.2, seed=3)
    classes = edge_color(g)
    max_deg = max(g.degree(v) for v in range(g.n))
    assert len(classes) <= 2 * max_deg - 1
    covered = sorted(e for c in classes for e in c.edges)
    assert covered == sorted(g.edges())
    for c in classes:
        assert_proper_matching(c)


def test_neighborhood_ratio():
    g = complete_graph(5)
    assert neighborhood_ratio(g, set()) == 0.0
    assert neighborhood_ratio(g, set(range(5))) == 1.0
    assert neighborhood_ratio(star_graph(4), {1, 2}) == pytest.approx(0.5)


def test_neighborhood_ratio_skips_isolated():
    g = Graph(4, [(0, 1)])
    assert neighborhood_ratio(g, {2, 3}) == 0.0


def test_sparsify_split_identity():
    g = gnp(50, 0.2, seed=1)
    m = TaggedMatching()
    m.add(0, 1)
    assert sparsify_split(g, m, 1, seed=0) == [(g, m)]


def test_sparsify_split_partitions():
    g = gnp(200, 0.1, seed=5)
    m = TaggedMatching()
    taken = set()
    rng = random.Random(2)
    verts = rng.sample(range(200), 60)
    for i in range(0, 60, 2):
        m.add(verts[i], verts[i + 1])
    k = 5
    parts = sparsify_split(g, m, k, seed=9)
    assert len(parts) == k
    edge_union = set()
    matched = 0
    for gc, sub in parts:
        es = gc.edge_set()
        assert not (es & edge_union)
        edge_union |= es
        matched += len(sub)
    assert edge_union == g.edge_set()
    assert matched == len(m)


def test_sparsify_ratio_target():
    # finite-n rendering of the sparsify lemma at a desk-size n
    n = 1024
    g = gnp(n, math.log(n) ** 3 / n, seed=11)
    m = TaggedMatching()
    verts = random.Random(3).sample(range(n), n // 2)
    for i in range(0, len(verts), 2):
        m.add(verts[i], verts[i + 1])
    k = math.ceil(math.log(n))
    parts = sparsify_split(g, m, k, seed=13)
    bound = 4.0 / math.sqrt(math.log(n))
    good = sum(
        1 for gc, sub in parts if neighborhood_ratio(gc, sub.endpoints()) <= bound
    )
    assert good >= 0.9 * k
    assert all(len(sub) <= 2 * len(m) / k + 8 for _, sub in parts)


def test_pair_request_validation():
    with pytest.raises(ValueError):
        PairRequest([(0, 1), (1, 2)])
    assert len(PairRequest([(0, 1), (2, 3)])) == 2


def test_connect_pairs_empty():
    g = complete_graph(4)
    res = connect_pairs(g, [])
    assert res.paths == [] and res.unserved == []


def test_connect_pairs_k6_direct_edges():
    res = connect_pairs(complete_graph(6), [(0, 1), (2, 3)])
    assert res.paths == [[0, 1], [2, 3]]
    assert res.unserved == []


def test_connect_pairs_disjointness():
    g = gnp(500, 0.05, seed=21)
    rng = random.Random(7)
    verts = rng.sample(range(500), 40)
    pairs = [(verts[i], verts[i + 1]) for i in range(0, 40, 2)]
    res = connect_pairs(g, pairs, seed=3)
    interiors: set[int] = set()
    endpoints = {v for p in pairs for v in p}
    for idx, path in enumerate(res.paths):
        if path is None:
            assert idx in res.unserved
            continue
        a, b = pairs[idx]
        assert path[0] == a and path[-1] == b
        for x, y in zip(path, path[1:]):
            assert g.has_edge(x, y)
        inner = path[1:-1]
        assert not (set(inner) & endpoints)
        assert not (set(inner) & interiors)
        interiors.update(inner)


def test_connect_pairs_blocked_vertices():
    # path from 0 to 3 must dodge the blocked hub
    g = Graph(6, [(0, 1), (1, 3), (0, 4), (4, 5), (5, 3)])
    res = connect_pairs(g, [(0, 3)], blocked={1})
    (path,) = res.paths
    assert path is not None and 1 not in path


def test_connect_pairs_reports_unserved():
    g = Graph(4, [(0, 1)])  # vertices 2, 3 are isolated
    res = connect_pairs(g, [(2, 3)])
    assert res.paths == [None] and res.unserved == [0]


def test_close_matching_empty():
    res = close_matching_into_cycles(complete_graph(4), TaggedMatching())
    assert res.cycles == [] and res.failed_edges == []


def test_close_single_edge_through_path():
    gc = Graph(4, [(0, 2), (2, 1), (1, 3)])
    m = TaggedMatching()
    m.add(0, 1)
    res = close_matching_into_cycles(gc, m)
    assert len(res.cycles) == 1
    assert res.failed_edges == []
    assert res.covered_edges == {(0, 1)}
    assert res.connector_edges_used <= gc.edge_set()


def test_close_matching_conservation_and_validity():
    n = 512
    gc = gnp(n, math.log(n) ** 3 / n, seed=31)
    rng = random.Random(5)
    verts = rng.sample(range(n), 100)
    m = TaggedMatching()
    for i in range(0, 100, 2):
        m.add(verts[i], verts[i + 1])
    res = close_matching_into_cycles(gc, m, seed=8)
    assert len(res.failed_entries) + sum(
        1 for i in range(len(m)) if i not in res.failed_entries
    ) == len(m)
    used_matching = set()
    for cyc in res.cycles:
        assert len(cyc) == len(set(cyc))  # simple
        for x, y in zip(cyc, cyc[1:] + cyc[:1]):
            e = canonical_edge(x, y)
            assert gc.has_edge(*e) or e in m.edges
            if e in m.edges:
                used_matching.add(e)
    assert used_matching == res.covered_edges
    covered_entries = len(m) - len(res.failed_entries)
    assert len(res.covered_edges) == covered_entries


def test_close_matching_with_centers():
    # hub 0 with paired neighbors; closure must expand through the hub once
    h0 = star_graph(4)  # hub 0, leaves 1..4
    classes, leftover = build_auxiliary_pairing(h0, {0})
    assert leftover == []
    (cls,) = classes
    assert cls.centers == [0, 0]
    groups = split_avoiding_duplicates(cls)
    assert len(groups) == 2  # same center twice cannot share a closure group
    gc = gnp(20, 0.4, seed=41)
    if gc.has_edge(0, 1):
        gc.remove_edge(0, 1)  # hub must never carry connector traffic
    for grp in groups:
        res = close_matching_into_cycles(gc, grp, seed=2)
        for cyc in res.cycles:
            assert len(cyc) == len(set(cyc))
            assert cyc.count(0) <= 1


def test_close_matching_rejects_duplicate_centers():
    m = TaggedMatching()
    m.add(1, 2, center=0)
    m.add(3, 4, center=0)
    with pytest.raises(ValueError, match="duplicate centers"):
        close_matching_into_cycles(complete_graph(6), m)


def test_build_auxiliary_pairing_cases():
    assert build_auxiliary_pairing(star_graph(3), set()) == ([], [])
    classes, leftover = build_auxiliary_pairing(star_graph(4), {0})
    assert sum(len(c) for c in classes) == 2 and leftover == []
    classes, leftover = build_auxiliary_pairing(star_graph(5), {0})
    assert sum(len(c) for c in classes) == 2
    assert leftover == [(0, 5)]


def test_build_auxiliary_partitions_cross_edges():
    g = gnp(60, 0.2, seed=17)
    hubs = set(range(10))
    classes, leftover = build_auxiliary_pairing(g, hubs)
    expanded = []
    for cls in classes:
        for i in range(len(cls)):
            expanded.extend(cls.real_edges(i))
        assert_proper_matching(cls)
    cross = [
        e for e in g.edges() if (e[0] in hubs) != (e[1] in hubs)
    ]
    assert sorted(expanded + leftover) == sorted(cross)


def test_split_avoiding_duplicates():
    m = TaggedMatching()
    assert split_avoiding_duplicates(m) == []
    m.add(1, 2, center=None)
    m.add(3, 4, center=None)
    assert len(split_avoiding_duplicates(m)) == 1
    m2 = TaggedMatching()
    for k in range(3):
        m2.add(2 * k + 1, 2 * k + 2, center=0)
    assert len(split_avoiding_duplicates(m2)) == 3
    m3 = TaggedMatching()
    centers = [7, 7, 8, 8, 8]
    for i, c in enumerate(centers):
        m3.add(10 + 2 * i, 11 + 2 * i, center=c)
    groups = split_avoiding_duplicates(m3)
    assert sorted(len(g) for g in groups) == [1, 2, 2]
    for g in groups:
        real = [c for c in g.centers if c is not None]
        assert len(real) == len(set(real))


def test_split_avoiding_duplicates_cap():
    m = TaggedMatching()
    for k in range(10):
        m.add(2 * k, 2 * k + 1)
    groups = split_avoiding_duplicates(m, group_cap=4)
    assert all(len(g) <= 4 for g in groups)
    assert sum(len(g) for g in groups) == 10
