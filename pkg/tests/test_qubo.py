import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import enumerate_qubo, qubo_value, subset_min_cover
from vulngraph import (
    DimensionError, DualGraph, ParameterError, ParseError, Qubo, build_dual, encode_mvc,
    encode_weighted_mvc, energy, ising_energy, to_ising, vuln,
)
from vulngraph.qubo import connectivity_weights, dumps, loads, max_bias


def _dual(edges, n=None, weights=None):
    labels = sorted({x for e in edges for x in e} | set(n or ()))
    return DualGraph({vuln(x) for x in labels},
                     {(vuln(u), vuln(v)): (weights or {}).get((u, v), 1) for u, v in edges})


def _ground(q):
    table = enumerate_qubo(q.linear, dict(q.quadratic), q.offset)
    best = table[0][0]
    return best, {x for e, x in table if abs(e - best) < 1e-12}


def test_single_edge_coefficients():
    q = encode_mvc(_dual([("u", "v")]), 2.0)
    assert q.linear == (-1.0, -1.0)
    assert dict(q.quadratic) == {(0, 1): 2.0}
    assert q.offset == 2.0
    assert _ground(q) == (1.0, {(1, 0), (0, 1)})


def test_triangle_ground_states():
    q = encode_mvc(_dual([("a", "b"), ("b", "c"), ("a", "c")]), 2.0)
    assert _ground(q) == (2.0, {(1, 1, 0), (1, 0, 1), (0, 1, 1)})


def test_edgeless_dual():
    q = encode_mvc(DualGraph({vuln("a"), vuln("b")}, {}), 2.0)
    assert q.quadratic == {} and q.offset == 0
    assert q.linear == (1.0, 1.0)
    assert _ground(q) == (0.0, {(0, 0)})


@pytest.mark.parametrize("penalty", [1.0, 0.5, -3])
def test_penalty_must_exceed_one(penalty):
    with pytest.raises(ParameterError):
        encode_mvc(_dual([("a", "b")]), penalty)


def test_energy_examples():
    q = encode_mvc(_dual([("u", "v")]), 2.0)
    assert energy(q, [0, 0]) == 2.0
    assert energy(q, [1, 1]) == 2.0
    assert energy(q, [1, 0]) == 1.0
    with pytest.raises(DimensionError):
        energy(q, [1, 0, 1])


def test_zero_bias_reproduces_plain_encoding(worked_dual):
    assert encode_weighted_mvc(worked_dual, 2.0, 0.0) == encode_mvc(worked_dual, 2.0)


def test_weighted_path_prefers_centre():
    d = _dual([("a", "b"), ("b", "c")], weights={("a", "b"): 3, ("b", "c"): 1})
    q = encode_weighted_mvc(d, 2.0, 0.1)
    best, states = _ground(q)
    assert states == {(0, 1, 0)}
    assert best == pytest.approx(0.9)


def test_weighted_disjoint_edges():
    d = _dual([("a", "b"), ("c", "d")], weights={("a", "b"): 5, ("c", "d"): 1})
    q = encode_weighted_mvc(d, 2.0, 0.1)
    best, states = _ground(q)
    # normalised weights (1, 1, 0.2, 0.2): each edge's endpoints tie
    assert best == pytest.approx(1.88)
    assert states == {(1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1)}


def test_bias_range(worked_dual):
    bound = max_bias(worked_dual)
    assert bound == pytest.approx(1 / (1 + sum(connectivity_weights(worked_dual).values())))
    with pytest.raises(ParameterError):
        encode_weighted_mvc(worked_dual, 2.0, bound)
    with pytest.raises(ParameterError):
        encode_weighted_mvc(worked_dual, 2.0, -0.01)


def test_worked_dual_ground_energy_is_cover_size(worked_dual):
    q = encode_mvc(worked_dual)
    best, states = _ground(q)
    assert best == 5
    labels = [v.label for v in q.variables]
    assert {frozenset(l for l, b in zip(labels, x) if b) for x in states} == {
        frozenset("12468"), frozenset("12678")}


def random_dual(rng, n, p):
    edges = [(f"{i:02d}", f"{j:02d}") for i, j in itertools.combinations(range(n), 2) if rng.random() < p]
    weights = {e: int(rng.integers(1, 5)) for e in edges}
    return _dual(edges, n=[f"{i:02d}" for i in range(n)], weights=weights)


@pytest.mark.parametrize("penalty", [1.5, 2.0, 8.0])
def test_encoding_soundness(penalty):
    rng = np.random.default_rng(int(penalty * 10))
    for _ in range(25):
        n = int(rng.integers(1, 10))
        d = random_dual(rng, n, float(rng.uniform(0.1, 0.9)))
        edges = [(u.label, v.label) for u, v in d.edges()]
        k, _ = subset_min_cover([v.label for v in d.vertices], edges)
        q = encode_mvc(d, penalty)
        table = enumerate_qubo(q.linear, dict(q.quadratic), q.offset)
        best = table[0][0]
        assert best == pytest.approx(k)
        for e, x in table:
            chosen = {q.variables[i].label for i, b in enumerate(x) if b}
            is_cover = all(u in chosen or v in chosen for u, v in edges)
            if abs(e - best) < 1e-9:
                assert is_cover
            if not is_cover:
                assert e >= k + (penalty - 1) - 1e-9


def test_bias_never_changes_cardinality():
    rng = np.random.default_rng(7)
    for _ in range(40):
        n = int(rng.integers(2, 10))
        d = random_dual(rng, n, float(rng.uniform(0.2, 0.8)))
        edges = [(u.label, v.label) for u, v in d.edges()]
        k, _ = subset_min_cover([v.label for v in d.vertices], edges)
        bias = 0.999 * max_bias(d)
        q = encode_weighted_mvc(d, 2.0, bias)
        _, states = _ground(q)
        assert all(sum(x) == k for x in states)


coeff = st.integers(-20, 20).map(lambda v: v / 4)


@st.composite
def raw_qubos(draw):
    n = draw(st.integers(0, 6))
    linear = draw(st.lists(coeff, min_size=n, max_size=n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    quad = {p: draw(coeff) for p in pairs if draw(st.booleans())}
    return Qubo(tuple(range(n)), linear, quad, draw(coeff))


@given(raw_qubos())
def test_ising_round_trip(q):
    m = to_ising(q)
    for x in itertools.product((0, 1), repeat=q.n):
        s = 2 * np.array(x, dtype=int) - 1
        assert ising_energy(m, s) == energy(q, np.array(x))


@given(raw_qubos())
def test_energy_matches_direct_sum(q):
    for x in itertools.product((0, 1), repeat=q.n):
        assert energy(q, np.array(x)) == pytest.approx(
            qubo_value(q.linear, dict(q.quadratic), q.offset, x), abs=1e-12)


def test_ising_of_zero_qubo():
    m = to_ising(Qubo((0, 1), (0, 0), {}, 0))
    assert m.fields == (0.0, 0.0) and dict(m.couplings) == {} and m.offset == 0


def test_matrix_is_upper_triangular(worked_dual):
    Q = encode_mvc(worked_dual).matrix()
    assert np.allclose(Q, np.triu(Q))
    x = np.array([1, 1, 0, 1, 0, 1, 0, 1])
    assert x @ Q @ x + encode_mvc(worked_dual).offset == 5


@given(raw_qubos())
def test_text_round_trip(q):
    assert loads(dumps(q)) == q


def test_text_format_layout():
    q = encode_mvc(_dual([("u", "v")]), 2.0)
    assert dumps(q).splitlines() == ["2 2.0", "0 0 -1.0", "1 1 -1.0", "0 1 2.0"]


@pytest.mark.parametrize("text", ["", "2\n", "2 0\n0 5 1\n", "2 0\n1 0 1\n", "2 0\n0 0 x\n"])
def test_text_parse_errors(text):
    with pytest.raises(ParseError):
        loads(text)
