"""Regenerate the bundled example networks in src/reduced_google/data."""

from pathlib import Path

import numpy as np

from reduced_google.graph import DirectedGraph
from reduced_google.io import write_edge_list, write_labels
from reduced_google.oracle import random_graph

DATA = Path(__file__).resolve().parents[1] / "src" / "reduced_google" / "data"
GROUPS = ["OC", "BC", "RC", "GC", "YC", "PUC", "PIC"]
COLORS = ["orange", "blue", "red", "green", "yellow", "purple", "pink"]


def fixture40(seed=40):
    """40 nodes in 7 groups; a few hubs collect links, a few broadcasters emit them."""
    rng = np.random.default_rng(seed)
    n = 40
    group = np.arange(n) % len(GROUPS)
    hubs = [0, 1, 2, 3]
    broadcasters = [33, 35, 37, 39]
    src, tgt = [], []
    for j in range(n):
        same = np.flatnonzero((group == group[j]) & (np.arange(n) != j))
        picks = rng.choice(same, size=int(rng.integers(1, 4)), replace=False)
        src += [j] * len(picks)
        tgt += [int(t) for t in picks]
        for h in hubs:
            if h != j and rng.random() < 0.6:
                src.append(j)
                tgt.append(h)
        if rng.random() < 0.3:
            src.append(j)
            tgt.append(int(rng.integers(n)))
    for b in broadcasters:
        for t in rng.choice(n, size=18, replace=False):
            src.append(b)
            tgt.append(int(t))
    # two dangling pages
    keep = [(s, t) for s, t in zip(src, tgt) if s not in (20, 27)]
    src, tgt = zip(*keep)
    labels = [f"n{i:02d}" for i in range(n)]
    g = DirectedGraph.from_edges(n, src, tgt, labels)
    return g, group


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    g, group = fixture40()
    write_edge_list(DATA / "fixture40_edges.txt", g)
    write_labels(DATA / "fixture40_labels.tsv", g)
    subset = [0, 1, 2, 3, 5, 8, 11, 13, 16, 19, 22, 26, 30, 33, 36, 39]
    (DATA / "fixture40_subset.txt").write_text("".join(f"{g.labels[m]}\n" for m in subset))
    (DATA / "fixture40_groups.tsv").write_text(
        "".join(f"{g.labels[i]}\t{GROUPS[group[i]]}\t{COLORS[group[i]]}\n" for i in range(g.node_count))
    )
    (DATA / "fixture40_all.txt").write_text("".join(f"{lab}\n" for lab in g.labels))

    g30 = random_graph(30, mean_degree=3.0, seed=30)
    write_edge_list(DATA / "fixture30_edges.txt", g30)
    (DATA / "fixture30_subset.txt").write_text("".join(f"{m}\n" for m in (4, 9, 17, 22, 28)))


if __name__ == "__main__":
    main()
