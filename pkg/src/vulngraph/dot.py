"""Graphviz DOT rendering for vulnerability graphs and their duals."""

from __future__ import annotations

from .dual import DualGraph
from .graph import VertexId, VulnerabilityGraph


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _node_id(v: VertexId) -> str:
    return _q(f"{v.kind.value}:{v.label}")


def graph_to_dot(g: VulnerabilityGraph, name: str = "vulnerability_graph", highlight=()) -> str:
    """Vulnerabilities as circles, hosts as boxes; ``highlight`` vulns are filled."""
    highlight = set(highlight)
    lines = [f"graph {_q(name)} {{", "  rankdir=TB;"]
    lines.append("  { rank=same;")
    for h in g.sorted_hosts():
        lines.append(f"    {_node_id(h)} [label={_q(h.label)}, shape=box, color=red];")
    lines.append("  }")
    lines.append("  { rank=same;")
    for v in g.sorted_vulns():
        style = ", style=filled, fillcolor=lightblue" if v in highlight else ""
        lines.append(f"    {_node_id(v)} [label={_q(v.label)}, shape=circle, color=blue{style}];")
    lines.append("  }")
    for v, h in sorted(g.edges):
        lines.append(f"  {_node_id(v)} -- {_node_id(h)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dual_to_dot(d: DualGraph, name: str = "dual", cover=()) -> str:
    cover = set(cover)
    lines = [f"graph {_q(name)} {{", "  node [shape=circle];"]
    for v in d.sorted_vertices():
        attrs = " [style=filled, fillcolor=lightblue]" if v in cover else ""
        lines.append(f"  {_q(v.label)}{attrs};")
    for (u, v), w in d.weights.items():
        lines.append(f"  {_q(u.label)} -- {_q(v.label)} [label={_q(str(w))}, weight={w}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
