#!/usr/bin/env python3
"""Generate the committed small-graph corpora (graph6, one graph per line).

Writes, for n = 1..MAX_N, one representative of every isomorphism class of
simple graphs on n vertices, plus the triangle-free subset.  Isomorphism
classes are separated with nauty canonical certificates (pynauty); graph6
lines are produced by networkx.
"""
import sys
from pathlib import Path

import networkx as nx
import pynauty

MAX_N = int(sys.argv[1]) if len(sys.argv) > 1 else 8
OUT = Path(__file__).resolve().parent.parent / "crates" / "core" / "data"


def certificate(g):
    n = g.number_of_nodes()
    adj = {v: list(g.neighbors(v)) for v in g.nodes}
    return pynauty.certificate(pynauty.Graph(n, adjacency_dict=adj))


def extend(graphs, n):
    """All graphs on n vertices from those on n-1 by adding a vertex."""
    seen = {}
    for g in graphs:
        for mask in range(1 << (n - 1)):
            h = g.copy()
            h.add_node(n - 1)
            h.add_edges_from((u, n - 1) for u in range(n - 1) if mask >> u & 1)
            c = certificate(h)
            if c not in seen:
                seen[c] = h
    return list(seen.values())


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    layers = [[nx.empty_graph(1)]]
    for n in range(2, MAX_N + 1):
        layers.append(extend(layers[-1], n))
    lines = []
    for layer in layers:
        lines.extend(sorted(nx.to_graph6_bytes(g, header=False).decode().strip() for g in layer))
    tf = [l for l in lines if not any(nx.triangles(nx.from_graph6_bytes(l.encode())).values())]
    (OUT / f"graphs_n1-{MAX_N}.g6").write_text("\n".join(lines) + "\n")
    (OUT / f"triangle_free_n1-{MAX_N}.g6").write_text("\n".join(tf) + "\n")
    print([len(l) for l in layers], len(lines), len(tf))


if __name__ == "__main__":
    main()
