"""Weighted connectivity dual of a vulnerability graph.

The dual lives on vulnerability vertices only. Two vulnerabilities are joined
when they affect a common host; the edge weight counts the shared hosts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterator, Mapping

from .errors import DomainError, UnknownVertexError
from .graph import VertexId, VulnerabilityGraph


def _key(u: VertexId, v: VertexId) -> tuple:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class DualGraph:
    vertices: frozenset
    weights: Mapping  # (u, v) with u < v -> positive int
    _adj: Mapping = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        weights = {}
        adj: dict = {v: {} for v in self.vertices}
        for (u, v), w in dict(self.weights).items():
            if u == v:
                raise DomainError(f"self-loop on {u}")
            if u not in adj or v not in adj:
                raise DomainError(f"edge ({u}, {v}) has an endpoint outside the vertex set")
            if int(w) != w or w < 1:
                raise DomainError(f"edge weight must be a positive integer, got {w!r}")
            k = _key(u, v)
            if k in weights:
                raise DomainError(f"duplicate edge {u}-{v}")
            weights[k] = int(w)
            adj[u][v] = int(w)
            adj[v][u] = int(w)
        object.__setattr__(self, "weights", MappingProxyType(dict(sorted(weights.items()))))
        object.__setattr__(
            self, "_adj", MappingProxyType({v: MappingProxyType(n) for v, n in adj.items()})
        )

    def __hash__(self):
        return hash((self.vertices, frozenset(self.weights.items())))

    def __eq__(self, other):
        if not isinstance(other, DualGraph):
            return NotImplemented
        return self.vertices == other.vertices and dict(self.weights) == dict(other.weights)

    @property
    def n_edges(self) -> int:
        return len(self.weights)

    def edges(self) -> Iterator[tuple]:
        """Yield ``(u, v)`` with ``u < v`` in sorted order."""
        return iter(self.weights)

    def weight(self, u: VertexId, v: VertexId) -> int:
        """Shared-host count; 0 when the pair is not adjacent."""
        return self.weights.get(_key(u, v), 0)

    def neighbors(self, v: VertexId) -> Mapping:
        try:
            return self._adj[v]
        except KeyError:
            raise UnknownVertexError(v) from None

    def degree(self, v: VertexId) -> int:
        return len(self.neighbors(v))

    def strength(self, v: VertexId) -> int:
        """Sum of incident edge weights."""
        return sum(self.neighbors(v).values())

    def sorted_vertices(self) -> list:
        return sorted(self.vertices)


def build_dual(g: VulnerabilityGraph) -> DualGraph:
    """Construct the connectivity dual of ``g``.

    Walks vulnerabilities in sorted order; for each one, every host it affects
    contributes 1 to the weight towards each not-yet-processed vulnerability on
    that host. Processed vulnerabilities are tracked in a set instead of being
    deleted from ``g``, so each unordered pair is counted from one side only.
    """
    weights: dict = {}
    done = set()
    for vi in g.sorted_vulns():
        for h in g.neighbors(vi):
            for vj in g.neighbors(h):
                if vj == vi or vj in done:
                    continue
                k = _key(vi, vj)
                weights[k] = weights.get(k, 0) + 1
        done.add(vi)
    return DualGraph(g.vulns, weights)


def shared_hosts(g: VulnerabilityGraph, u: VertexId, v: VertexId) -> frozenset:
    """Hosts affected by both ``u`` and ``v``."""
    for x in (u, v):
        if not isinstance(x, VertexId) or not x.is_vuln:
            raise DomainError(f"{x!r} is not a vulnerability vertex")
    if u == v:
        raise DomainError("shared_hosts needs two distinct vulnerabilities")
    return g.neighbors(u) & g.neighbors(v)
