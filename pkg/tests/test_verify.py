import numpy as np
import pytest
from hypothesis import given

from strategies import graphs
from test_qubo import random_dual  # noqa: F401
from vulngraph import (
    AnnealParams, DomainError, build_dual, build_graph, decode, encode_mvc, find_killchain,
    host, remove_vulns, sample_annealing, solve_exact, solve_greedy, verify_remediation, vuln,
)

PAPER_COVER = [vuln(x) for x in "12468"]


def test_worked_residual(worked_graph):
    r = remove_vulns(worked_graph, PAPER_COVER)
    assert {v.label for v in r.vulns} == {"3", "5", "7"}
    assert {v.label: {h.label for h in r.neighbors(v)} for v in r.vulns} == {
        "3": set("ade"), "5": {"g"}, "7": set("bcf")}
    assert r.hosts == worked_graph.hosts
    assert len(r.edges) == 7
    # the source is untouched
    assert len(worked_graph.edges) == 21


def test_remove_nothing(worked_graph):
    assert remove_vulns(worked_graph, []) == worked_graph


def test_remove_everything(worked_graph):
    r = remove_vulns(worked_graph, worked_graph.vulns)
    assert r.hosts == worked_graph.hosts and not r.vulns and not r.edges


def test_remove_rejects_hosts_and_unknowns(worked_graph):
    with pytest.raises(DomainError):
        remove_vulns(worked_graph, [host("a")])
    with pytest.raises(DomainError):
        remove_vulns(worked_graph, [vuln("42")])


def test_verify_paper_cover(worked_graph):
    rep = verify_remediation(worked_graph, PAPER_COVER)
    assert rep.killchain_free and rep.residual_edge_count == 7 and rep.witness is None


def test_verify_partial_cover(worked_graph):
    rep = verify_remediation(worked_graph, [vuln("1")])
    assert not rep.killchain_free
    assert rep.witness.holds_in(rep.residual)
    assert find_killchain(rep.residual) is not None


def test_verify_single_vuln():
    g = build_graph([("a", ["x"]), ("b", ["x"])])
    assert verify_remediation(g, []).killchain_free


def test_verify_accepts_cover_objects(worked_graph, worked_dual):
    assert verify_remediation(worked_graph, solve_exact(worked_dual)).killchain_free


@given(graphs)
def test_valid_covers_remove_every_chain(g):
    d = build_dual(g)
    for cover in (solve_exact(d), solve_greedy(d)):
        assert cover.valid
        assert verify_remediation(g, cover).killchain_free


@given(graphs)
def test_residual_keeps_hosts_and_adds_no_edges(g):
    cover = solve_exact(build_dual(g))
    r = remove_vulns(g, cover.vertices)
    assert r.hosts == g.hosts and r.edges <= g.edges


@given(graphs)
def test_dropping_a_needed_vertex_reopens_a_chain(g):
    d = build_dual(g)
    cover = solve_exact(d)
    for v in cover.vertices:
        reduced = cover.vertices - {v}
        exposed = any(u not in reduced for u in d.neighbors(v))
        rep = verify_remediation(g, reduced)
        assert rep.killchain_free == (not exposed)


def test_annealed_valid_samples_pass():
    rng = np.random.default_rng(0)
    from vulngraph.bench import random_vuln_graph
    for seed in range(10):
        g = random_vuln_graph(int(rng.integers(3, 12)), 8, 0.3, seed)
        d = build_dual(g)
        q = encode_mvc(d)
        ss = sample_annealing(q, AnnealParams(num_reads=10, num_sweeps=100, seed=seed))
        for s in ss.samples:
            c = decode(q, s.bits, d)
            assert verify_remediation(g, c).killchain_free or not c.valid
