"""AR quivers and mutation graphs, DOT emission, isomorphism comparison.

Vertices carry an opaque attribute (dimension-vector data) used by the
comparator; solid arrows carry multiplicities, dashed arrows encode the
AR translate.  DOT output is deterministic byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx


@dataclass
class ARQuiver:
    vertices: list[str]
    attrs: dict[str, object] = field(default_factory=dict)
    solid: dict[tuple[str, str], int] = field(default_factory=dict)
    dashed: list[tuple[str, str]] = field(default_factory=list)

    def to_dot(self) -> str:
        lines = ["digraph ar_quiver {"]
        for v in sorted(self.vertices):
            attr = self.attrs.get(v)
            label = v if attr is None else v
            lines.append(f'  "{v}" [label="{label}"];')
        for (src, dst) in sorted(self.solid):
            mult = self.solid[(src, dst)]
            extra = f', label="{mult}"' if mult > 1 else ""
            lines.append(f'  "{src}" -> "{dst}" [style=solid{extra}];')
        for (src, dst) in sorted(self.dashed):
            lines.append(f'  "{src}" -> "{dst}" [style=dashed];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_networkx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        for v in self.vertices:
            g.add_node(v, attr=self.attrs.get(v))
        for (src, dst), mult in self.solid.items():
            g.add_edge(src, dst, kind=("solid", mult))
        for (src, dst) in self.dashed:
            g.add_edge(src, dst, kind=("dashed", 1))
        return g


def ar_quivers_isomorphic(g1: ARQuiver, g2: ARQuiver, respect_attrs: bool = True) -> bool:
    """Digraph isomorphism respecting edge kinds and, optionally, vertex attrs.

    A vertex attribute of None acts as a wildcard.
    """
    n1, n2 = g1.to_networkx(), g2.to_networkx()

    def node_match(a, b):
        if not respect_attrs:
            return True
        if a.get("attr") is None or b.get("attr") is None:
            return True
        return a["attr"] == b["attr"]

    def edge_match(e1, e2):
        k1 = sorted(d["kind"] for d in e1.values())
        k2 = sorted(d["kind"] for d in e2.values())
        return k1 == k2

    matcher = nx.algorithms.isomorphism.MultiDiGraphMatcher(
        n1, n2, node_match=node_match, edge_match=edge_match)
    return matcher.is_isomorphic()


@dataclass
class MutationGraph:
    vertices: list[tuple[str, ...]]
    edges: list[tuple[tuple[str, ...], tuple[str, ...], str]]

    def to_dot(self) -> str:
        lines = ["graph mutation {"]
        names = {v: "+".join(v) for v in self.vertices}
        for v in sorted(self.vertices):
            lines.append(f'  "{names[v]}";')
        seen = set()
        for (u, v, label) in sorted(self.edges):
            key = tuple(sorted((u, v))) + (label,)
            if key in seen:
                continue
            seen.add(key)
            a, b = sorted((names[u], names[v]))
            lines.append(f'  "{a}" -- "{b}" [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def undirected_edge_set(self) -> set:
        return {frozenset((u, v)) for (u, v, _) in self.edges}

    def edge_labels(self) -> dict:
        out = {}
        for (u, v, label) in self.edges:
            out.setdefault(frozenset((u, v)), set()).add(label)
        return out


def mutation_graphs_isomorphic(g1: MutationGraph, g2: MutationGraph) -> bool:
    n1, n2 = nx.Graph(), nx.Graph()
    for v in g1.vertices:
        n1.add_node(v)
    for (u, v, _) in g1.edges:
        n1.add_edge(u, v)
    for v in g2.vertices:
        n2.add_node(v)
    for (u, v, _) in g2.edges:
        n2.add_edge(u, v)
    return nx.is_isomorphic(n1, n2)
