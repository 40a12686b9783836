from itertools import combinations
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import WORKED_ADJACENCY, WORKED_DUAL_EDGES
from oracles import intersection_weights
from strategies import graphs, host_records
from vulngraph import DomainError, DualGraph, build_dual, build_graph, host, shared_hosts, vuln


def _labels(d):
    return {(u.label, v.label) for u, v in d.edges()}


def test_worked_dual_edges(worked_dual):
    assert _labels(worked_dual) == WORKED_DUAL_EDGES
    assert worked_dual.n_edges == 18


def test_worked_dual_weights_match_intersection_oracle(worked_dual):
    expected = intersection_weights(WORKED_ADJACENCY)
    got = {(u.label, v.label): w for (u, v), w in worked_dual.weights.items()}
    assert got == expected
    assert worked_dual.weight(vuln("1"), vuln("2")) == 2
    assert worked_dual.weight(vuln("1"), vuln("3")) == 2
    assert worked_dual.weight(vuln("5"), vuln("6")) == 1
    assert worked_dual.weight(vuln("4"), vuln("7")) == 3


def test_shared_hosts(worked_graph):
    assert shared_hosts(worked_graph, vuln("4"), vuln("7")) == {host("b"), host("c"), host("f")}
    assert shared_hosts(worked_graph, vuln("5"), vuln("3")) == set()
    with pytest.raises(DomainError):
        shared_hosts(worked_graph, vuln("4"), vuln("4"))
    with pytest.raises(DomainError):
        shared_hosts(worked_graph, vuln("4"), host("a"))


def test_disjoint_hosts_give_edgeless_dual():
    g = build_graph([("a", ["1"]), ("b", ["2"]), ("c", ["3"])])
    d = build_dual(g)
    assert d.vertices == g.vulns and d.n_edges == 0


def test_isolated_vulns_are_kept(worked_graph):
    g = build_graph([("a", ["1", "2"]), ("b", ["3"])])
    d = build_dual(g)
    assert vuln("3") in d.vertices and d.degree(vuln("3")) == 0


def test_dual_rejects_bad_edges():
    with pytest.raises(DomainError):
        DualGraph({vuln("1")}, {(vuln("1"), vuln("1")): 1})
    with pytest.raises(DomainError):
        DualGraph({vuln("1"), vuln("2")}, {(vuln("1"), vuln("2")): 0})
    with pytest.raises(DomainError):
        DualGraph({vuln("1")}, {(vuln("1"), vuln("2")): 1})


@given(graphs)
def test_weights_equal_shared_host_counts(g):
    d = build_dual(g)
    assert d.vertices == g.vulns
    for u, v in combinations(sorted(g.vulns), 2):
        n = len(shared_hosts(g, u, v))
        assert d.weight(u, v) == n
        assert ((u, v) in d.weights) == (n >= 1)


@given(graphs)
def test_weight_sum_counts_host_pairs(g):
    d = build_dual(g)
    assert sum(d.weights.values()) == sum(comb(g.degree(h), 2) for h in g.hosts)


@given(host_records, st.randoms(use_true_random=False))
def test_dual_independent_of_record_order(records, rnd):
    shuffled = list(records)
    rnd.shuffle(shuffled)
    assert build_dual(build_graph(records)) == build_dual(build_graph(shuffled))


def test_source_graph_untouched(worked_graph):
    before = (worked_graph.hosts, worked_graph.vulns, worked_graph.edges)
    build_dual(worked_graph)
    assert (worked_graph.hosts, worked_graph.vulns, worked_graph.edges) == before
