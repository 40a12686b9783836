"""Slow, obviously-correct reference implementations used only by tests."""

from itertools import combinations, product


def subset_min_cover(vertices, edges):
    """All minimum vertex covers by enumerating subsets in size order."""
    vertices = sorted(vertices)
    for k in range(len(vertices) + 1):
        found = [set(c) for c in combinations(vertices, k)
                 if all(u in c or v in c for u, v in edges)]
        if found:
            return k, found
    raise AssertionError("unreachable")


def intersection_weights(adjacency):
    """Dual weights from a ``vuln -> set(hosts)`` map by pairwise intersection."""
    out = {}
    for u, v in combinations(sorted(adjacency), 2):
        shared = set(adjacency[u]) & set(adjacency[v])
        if shared:
            out[(u, v)] = len(shared)
    return out


def qubo_value(linear, quadratic, offset, x):
    return (offset + sum(a * xi for a, xi in zip(linear, x))
            + sum(b * x[i] * x[j] for (i, j), b in quadratic.items()))


def enumerate_qubo(linear, quadratic, offset):
    """``[(energy, bits), ...]`` over all assignments, ascending."""
    n = len(linear)
    return sorted((qubo_value(linear, quadratic, offset, x), x) for x in product((0, 1), repeat=n))
