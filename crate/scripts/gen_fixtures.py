#!/usr/bin/env python3
"""Generate named small graphs (n <= 10), graph6 reference encodings and a
random corpus with 9 <= n <= 20."""
import random
from pathlib import Path

import networkx as nx

OUT = Path(__file__).resolve().parent.parent / "crates" / "core" / "data"

NAMED = [
    ("K1", nx.complete_graph(1)),
    ("K2", nx.complete_graph(2)),
    ("K3", nx.complete_graph(3)),
    ("K4", nx.complete_graph(4)),
    ("empty3", nx.empty_graph(3)),
    ("P3", nx.path_graph(3)),
    ("P4", nx.path_graph(4)),
    ("C4", nx.cycle_graph(4)),
    ("C5", nx.cycle_graph(5)),
    ("C6", nx.cycle_graph(6)),
    ("C7", nx.cycle_graph(7)),
    ("C10", nx.cycle_graph(10)),
    ("star4", nx.star_graph(3)),
    ("K23", nx.complete_bipartite_graph(2, 3)),
    ("K33", nx.complete_bipartite_graph(3, 3)),
    ("K44", nx.complete_bipartite_graph(4, 4)),
    ("cube", nx.hypercube_graph(3)),
    ("petersen", nx.petersen_graph()),
    ("bull", nx.bull_graph()),
    ("house", nx.house_graph()),
    ("wheel6", nx.wheel_graph(6)),
    ("2K3", nx.disjoint_union(nx.complete_graph(3), nx.complete_graph(3))),
]


def main():
    lines = []
    for name, g in NAMED:
        g = nx.convert_node_labels_to_integers(g)
        lines.append(f"{nx.to_graph6_bytes(g, header=False).decode().strip()} {name}")
    (OUT / "named_n1-10.g6").write_text("\n".join(lines) + "\n")

    rng = random.Random(20240611)
    ref = []
    for _ in range(300):
        n = rng.randint(0, 70)
        p = rng.random()
        g = nx.gnp_random_graph(n, p, seed=rng.randrange(1 << 30))
        enc = nx.to_graph6_bytes(g, header=False).decode().strip()
        edges = " ".join(f"{u}-{v}" for u, v in sorted(g.edges()))
        ref.append(f"{enc}\t{n}\t{edges}")
    (OUT / "graph6_reference.tsv").write_text("\n".join(ref) + "\n")

    rng = random.Random(9020)
    rand = []
    for _ in range(500):
        n = rng.randint(9, 20)
        p = rng.uniform(0.1, 0.6)
        g = nx.gnp_random_graph(n, p, seed=rng.randrange(1 << 30))
        rand.append(nx.to_graph6_bytes(g, header=False).decode().strip())
    (OUT / "random_n9-20.g6").write_text("\n".join(rand) + "\n")


if __name__ == "__main__":
    main()
