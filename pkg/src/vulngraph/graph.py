"""Bipartite vulnerability graph: hosts on one side, vulnerabilities on the other.

An edge ``(vuln, host)`` records that the host is affected by the vulnerability.
Graphs are immutable; operations that remove vertices return new graphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DomainError, InputError, UnknownVertexError


class Kind(str, Enum):
    HOST = "host"
    VULN = "vuln"


@dataclass(frozen=True, order=True)
class VertexId:
    """A vertex tagged with its partition.

    The same label may name a host and a vulnerability; ``kind`` tells them apart.
    """

    kind: Kind
    label: str

    def __post_init__(self):
        if not isinstance(self.label, str) or not self.label:
            raise InputError(f"vertex label must be a non-empty string, got {self.label!r}")
        if not isinstance(self.kind, Kind):
            object.__setattr__(self, "kind", Kind(self.kind))

    @property
    def is_host(self) -> bool:
        return self.kind is Kind.HOST

    @property
    def is_vuln(self) -> bool:
        return self.kind is Kind.VULN

    def __str__(self) -> str:
        return self.label


def host(label: str) -> VertexId:
    return VertexId(Kind.HOST, label)


def vuln(label: str) -> VertexId:
    return VertexId(Kind.VULN, label)


@dataclass(frozen=True)
class VulnerabilityGraph:
    hosts: frozenset
    vulns: frozenset
    edges: frozenset  # of (vuln, host) tuples
    _adj: Mapping = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "hosts", frozenset(self.hosts))
        object.__setattr__(self, "vulns", frozenset(self.vulns))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for h in self.hosts:
            if not isinstance(h, VertexId) or not h.is_host:
                raise DomainError(f"{h!r} is not a host vertex")
        for v in self.vulns:
            if not isinstance(v, VertexId) or not v.is_vuln:
                raise DomainError(f"{v!r} is not a vulnerability vertex")
        adj: dict = {x: set() for x in self.hosts | self.vulns}
        for e in self.edges:
            v, h = e
            if v not in self.vulns or h not in self.hosts:
                raise DomainError(f"edge {e!r} must join a known vuln to a known host")
            adj[v].add(h)
            adj[h].add(v)
        object.__setattr__(
            self, "_adj", MappingProxyType({x: frozenset(n) for x, n in adj.items()})
        )

    def __contains__(self, v) -> bool:
        return v in self._adj

    def neighbors(self, v: VertexId) -> frozenset:
        try:
            return self._adj[v]
        except KeyError:
            raise UnknownVertexError(v) from None

    def degree(self, v: VertexId) -> int:
        return len(self.neighbors(v))

    def sorted_hosts(self) -> list:
        return sorted(self.hosts)

    def sorted_vulns(self) -> list:
        return sorted(self.vulns)

    def host_records(self) -> list:
        """Host-first view: ``[(host_label, [vuln_label, ...]), ...]`` sorted by label."""
        return [
            (h.label, sorted(v.label for v in self._adj[h])) for h in self.sorted_hosts()
        ]

    def __repr__(self) -> str:
        return (
            f"VulnerabilityGraph(hosts={len(self.hosts)}, vulns={len(self.vulns)}, "
            f"edges={len(self.edges)})"
        )


@dataclass(frozen=True)
class KillChain:
    """Vulnerabilities chained pairwise through shared hosts.

    ``witnesses[i]`` is a host affected by both ``vulns[i]`` and ``vulns[i + 1]``.
    """

    vulns: tuple
    witnesses: tuple

    def __post_init__(self):
        object.__setattr__(self, "vulns", tuple(self.vulns))
        object.__setattr__(self, "witnesses", tuple(self.witnesses))
        if len(self.vulns) < 2:
            raise InputError("a kill chain needs at least two vulnerabilities")
        if len(self.witnesses) != len(self.vulns) - 1:
            raise InputError("need exactly one witness host per consecutive vuln pair")

    def holds_in(self, g: VulnerabilityGraph) -> bool:
        for (a, b), h in zip(zip(self.vulns, self.vulns[1:]), self.witnesses):
            if a == b or a not in g or b not in g or h not in g:
                return False
            if (a, h) not in g.edges or (b, h) not in g.edges:
                return False
        return True


def build_graph(host_records: Iterable[tuple[str, Sequence[str]]]) -> VulnerabilityGraph:
    """Turn host-first records ``(host, [vulns...])`` into a vulnerability graph.

    Repeated mentions of the same (host, vuln) pair collapse to one edge, and a
    host listed twice has its vulnerability lists merged.
    """
    hosts, vulns, edges = set(), set(), set()
    for rec in host_records:
        try:
            h_label, v_labels = rec
        except (TypeError, ValueError):
            raise InputError(f"record must be (host, [vulns]), got {rec!r}") from None
        if isinstance(v_labels, str):
            raise InputError(f"vulnerability list for host {h_label!r} must be a sequence")
        h = host(h_label)
        hosts.add(h)
        for label in v_labels:
            v = vuln(label)
            vulns.add(v)
            edges.add((v, h))
    return VulnerabilityGraph(hosts, vulns, edges)


def neighbors(g: VulnerabilityGraph, v: VertexId) -> frozenset:
    return g.neighbors(v)


def find_killchain(g: VulnerabilityGraph) -> Optional[KillChain]:
    """Return a shortest kill chain (two vulns sharing a host) or ``None``.

    Every longer chain contains such a vuln-host-vuln step, so absence of a
    length-2 chain means the vulnerability side is totally disconnected.
    """
    for h in g.sorted_hosts():
        vs = g.neighbors(h)
        if len(vs) >= 2:
            a, b = sorted(vs)[:2]
            return KillChain((a, b), (h,))
    return None
