import pytest

from cycleshred.gen import gnp
from cycleshred.graph import Graph, cycle_edges
from cycleshred.hamilton import find_hamilton_cycle, pack_hamilton_cycles
from conftest import complete_graph, cycle_graph, path_graph


def assert_hamilton(g, cycle):
    assert len(cycle) == g.n
    assert len(set(cycle)) == g.n
    for e in cycle_edges(cycle):
        assert g.has_edge(*e)


def test_c5_is_its_own_hamilton_cycle():
    c5 = cycle_graph(5)
    cyc = find_hamilton_cycle(c5)
    assert_hamilton(c5, cyc)


def test_k4_hamilton():
    cyc = find_hamilton_cycle(complete_graph(4))
    assert_hamilton(complete_graph(4), cyc)


def test_path_has_none():
    assert find_hamilton_cycle(path_graph(6)) is None


def test_small_n_rejected():
    with pytest.raises(ValueError):
        find_hamilton_cycle(Graph(2, [(0, 1)]))


def test_random_graph_hamilton():
    g = gnp(500, 0.1, seed=3)
    cyc = find_hamilton_cycle(g, seed=1)
    assert cyc is not None
    assert_hamilton(g, cyc)


def test_pack_zero_target():
    g = gnp(50, 0.3, seed=1)
    res = pack_hamilton_cycles(g, 0)
    assert res.cycles == [] and res.remainder == g
    assert res.stop_reason == "target-reached"


def test_pack_k5_decomposes_fully():
    res = pack_hamilton_cycles(complete_graph(5), 2, seed=4)
    assert len(res.cycles) == 2
    assert res.remainder.m == 0
    for cyc in res.cycles:
        assert_hamilton(complete_graph(5), cyc)


def test_pack_edge_disjoint_and_degree_drop():
    g = gnp(300, 0.5, seed=11)
    delta = min(g.degree(v) for v in range(g.n))
    res = pack_hamilton_cycles(g, delta // 2, seed=5)
    assert len(res.cycles) >= 0.5 * (delta // 2)
    replay = g.copy()
    for cyc in res.cycles:
        assert_hamilton(g, cyc)
        for e in cycle_edges(cyc):
            replay.remove_edge(*e)  # raises if any edge is reused
    for v in range(g.n):
        assert replay.degree(v) == g.degree(v) - 2 * len(res.cycles)
    assert replay == res.remainder


def test_pack_stops_on_failure_not_crash():
    # a graph with a degree-2 vertex allows at most one Hamilton cycle
    g = complete_graph(6)
    g2 = Graph(7, list(g.edges()) + [(0, 6), (1, 6)])
    res = pack_hamilton_cycles(g2, 3, seed=2)
    assert len(res.cycles) <= 1
    assert res.stop_reason in ("search-failed", "budget")
    assert res.remainder.m + sum(len(c) for c in res.cycles) == g2.m
