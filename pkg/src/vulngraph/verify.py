"""Certify that patching a set of vulnerabilities removes every kill chain."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import DomainError
from .graph import KillChain, VertexId, VulnerabilityGraph, find_killchain
from .solvers import VertexCover


@dataclass(frozen=True)
class RemediationReport:
    patched: frozenset
    residual: VulnerabilityGraph
    killchain_free: bool
    residual_edge_count: int
    witness: Optional[KillChain] = None


def remove_vulns(g: VulnerabilityGraph, patched: Iterable[VertexId]) -> VulnerabilityGraph:
    """Drop ``patched`` and their edges. Hosts are always kept."""
    patched = frozenset(patched)
    for v in patched:
        if not isinstance(v, VertexId) or not v.is_vuln:
            raise DomainError(f"{v!r} is not a vulnerability vertex")
        if v not in g.vulns:
            raise DomainError(f"vulnerability {v.label!r} is not in the graph")
    if not patched:
        return g
    edges = {e for e in g.edges if e[0] not in patched}
    return VulnerabilityGraph(g.hosts, g.vulns - patched, edges)


def verify_remediation(g: VulnerabilityGraph, cover) -> RemediationReport:
    """Remove ``cover`` from ``g`` and check no host still links two vulnerabilities.

    ``cover`` may be a :class:`VertexCover` or any iterable of vuln ids; it
    need not be a valid cover.
    """
    patched = cover.vertices if isinstance(cover, VertexCover) else frozenset(cover)
    residual = remove_vulns(g, patched)
    chain = find_killchain(residual)
    return RemediationReport(
        patched=frozenset(patched),
        residual=residual,
        killchain_free=chain is None,
        residual_edge_count=len(residual.edges),
        witness=chain,
    )
