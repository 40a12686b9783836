"""Scan-report ingestion and patch plans.

Reports are host-first JSON documents::

    {"schema_version": 1,
     "hosts": [{"id": "web01", "vulns": ["CVE-2021-44228", "CVE-2022-22965"]},
               {"id": "db01", "vulns": []}]}

``schema_version`` may be omitted and defaults to 1.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

from .dual import DualGraph, build_dual
from .errors import InvalidCoverError, ParseError, ValidationError
from .graph import VulnerabilityGraph, build_graph
from .qubo import connectivity_weights
from .solvers import VertexCover, uncovered_edges
from .verify import verify_remediation

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class HostRecord:
    id: str
    vulns: tuple


@dataclass(frozen=True)
class ScanReport:
    hosts: tuple

    def to_graph(self) -> VulnerabilityGraph:
        return build_graph((h.id, h.vulns) for h in self.hosts)

    @property
    def vuln_ids(self) -> set:
        return {v for h in self.hosts for v in h.vulns}


def _nonempty_str(x) -> bool:
    return isinstance(x, str) and x != ""


def parse_scan_report(data) -> ScanReport:
    """Parse and validate a report from ``bytes`` or ``str``."""
    if isinstance(data, (bytes, bytearray)):
        try:
            data = bytes(data).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"report is not valid UTF-8: {exc.reason}", 1, exc.start + 1) from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None

    if not isinstance(doc, dict):
        raise ValidationError("report must be a JSON object")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ValidationError(f"unsupported schema_version {version!r}")
    hosts = doc.get("hosts")
    if not isinstance(hosts, list):
        raise ValidationError("'hosts' must be a list")

    seen, records = set(), []
    for n, entry in enumerate(hosts):
        if not isinstance(entry, dict):
            raise ValidationError(f"hosts[{n}] must be an object")
        hid = entry.get("id")
        if not _nonempty_str(hid):
            raise ValidationError(f"hosts[{n}].id must be a non-empty string")
        if hid in seen:
            raise ValidationError(f"duplicate host id {hid!r}")
        seen.add(hid)
        vulns = entry.get("vulns", [])
        if not isinstance(vulns, list) or not all(_nonempty_str(v) for v in vulns):
            raise ValidationError(f"hosts[{n}].vulns must be a list of non-empty strings")
        unique = tuple(dict.fromkeys(vulns))
        if len(unique) != len(vulns):
            log.warning("host %r lists %d duplicate vulnerability mention(s); deduplicated",
                        hid, len(vulns) - len(unique))
        records.append(HostRecord(hid, unique))
    return ScanReport(tuple(records))


def serialize_graph(g: VulnerabilityGraph) -> str:
    """Host-first report for ``g``. Vulnerabilities without hosts cannot be expressed."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "hosts": [{"id": h, "vulns": vs} for h, vs in g.host_records()],
    }
    return json.dumps(doc, indent=2) + "\n"


@dataclass(frozen=True)
class PatchEntry:
    vuln: str
    weight: float  # normalised connectivity, 1.0 = best connected
    strength: int  # sum of incident dual weights
    hosts_affected: int


@dataclass(frozen=True)
class PatchPlan:
    entries: tuple
    killchain_free: bool

    def to_dict(self) -> dict:
        return {
            "killchain_free": self.killchain_free,
            "patches": [
                {"vuln": e.vuln, "weight": round(e.weight, 6), "strength": e.strength,
                 "hosts_affected": e.hosts_affected}
                for e in self.entries
            ],
        }


def make_patch_plan(g: VulnerabilityGraph, cover: VertexCover, d: DualGraph | None = None) -> PatchPlan:
    """Order the cover's vulnerabilities by connectivity, most connected first.

    Refuses with :class:`InvalidCoverError` if the cover misses a dual edge.
    """
    if d is None:
        d = build_dual(g)
    elif d.vertices != g.vulns:
        raise ValueError("dual does not belong to this graph")
    missing = uncovered_edges(d, cover.vertices)
    if missing:
        raise InvalidCoverError(missing)
    w = connectivity_weights(d)
    order = sorted(cover.vertices, key=lambda v: (-d.strength(v), v.label))
    entries = tuple(PatchEntry(v.label, w[v], d.strength(v), g.degree(v)) for v in order)
    report = verify_remediation(g, cover)
    return PatchPlan(entries, report.killchain_free)
