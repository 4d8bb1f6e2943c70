"""Best-effort Graphviz rendering of a graph annotated with edge values."""
from __future__ import annotations

from .jsonio import frac


def _q(s) -> str:
    return '"' + str(s).replace('"', '\\"') + '"'


def matching_dot(g, values) -> str:
    lines = ["graph fpm {"]
    for v in g.vertices:
        lines.append(f"  {_q(v)};")
    for (u, v), eid in zip(g.edges, g.edge_ids()):
        label = frac(values[eid]) if eid in values else "?"
        lines.append(f"  {_q(u)} -- {_q(v)} [label={_q(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
