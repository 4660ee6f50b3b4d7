"""File formats: rank and matrix CSVs, JSON summaries, DOT graphs."""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

import numpy as np

from .errors import GraphParseError

log = logging.getLogger(__name__)

NEUTRAL_GROUP = "other"
# fixed palette so colors depend only on the sorted group names
PALETTE = [
    "orange", "blue", "red", "green", "yellow", "purple", "pink",
    "cyan", "brown", "olivedrab", "gold", "navy",
]
NEUTRAL_COLOR = "gray"


def fmt(x):
    """17 significant digits: lossless float round trip."""
    return f"{float(x):.17g}"


def _writer(path):
    fh = open(path, "w", newline="", encoding="utf-8")
    return fh, csv.writer(fh, lineterminator="\n")


def write_edge_list(path, graph):
    src, tgt = graph.edges()
    lines = [f"{graph.labels[s]} {graph.labels[t]}" for s, t in zip(src, tgt)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_labels(path, graph):
    Path(path).write_text("".join(f"{i}\t{lab}\n" for i, lab in enumerate(graph.labels)), encoding="utf-8")


def write_rank_csv(path, graph, rank):
    ranks = rank.global_rank()
    fh, w = _writer(path)
    with fh:
        w.writerow(["node_id", "label", "probability", "global_rank"])
        for i, p in enumerate(rank.probabilities):
            w.writerow([i, graph.labels[i], fmt(p), int(ranks[i])])


def write_local_indices(path, subset, idx, members=None):
    pos = {m: i for i, m in enumerate(subset.members)}
    members = subset.members if members is None else members
    fh, w = _writer(path)
    with fh:
        w.writerow(["node_id", "label", "K", "K_star"])
        for m in members:
            i = pos[m]
            w.writerow([m, subset.labels[i], int(idx.K[i]), int(idx.K_star[i])])


def write_matrix_csv(path, matrix, labels):
    fh, w = _writer(path)
    with fh:
        w.writerow(labels)
        for row in np.asarray(matrix):
            w.writerow([fmt(x) for x in row])


def read_matrix_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise GraphParseError(f"{path}: empty matrix file")
    labels = rows[0]
    data = np.array([[float(x) for x in row] for row in rows[1:]])
    if data.shape != (len(labels), len(labels)):
        raise GraphParseError(f"{path}: expected a {len(labels)}x{len(labels)} matrix, got {data.shape}")
    return labels, data


def write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def parse_groups(text):
    """``label<TAB>group[<TAB>color]`` lines into (groups, colors) dicts."""
    groups, colors = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in (line.split("\t") if "\t" in line else line.split())]
        if len(parts) not in (2, 3):
            raise GraphParseError("expected 'label<TAB>group[<TAB>color]'", lineno)
        groups[parts[0]] = parts[1]
        if len(parts) == 3:
            if colors.get(parts[1], parts[2]) != parts[2]:
                raise GraphParseError(f"group {parts[1]!r} has two colors", lineno)
            colors[parts[1]] = parts[2]
    return groups, colors


def group_colors(groups, explicit=None):
    """Explicit colors first, then a fixed palette over the sorted group names."""
    colors = dict(explicit or {})
    free = [c for c in PALETTE if c not in colors.values()] or PALETTE
    for i, g in enumerate(sorted(set(groups.values()) - set(colors) - {NEUTRAL_GROUP})):
        colors[g] = free[i % len(free)]
    colors.setdefault(NEUTRAL_GROUP, NEUTRAL_COLOR)
    return colors


def _quote(s):
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def interaction_dot(graph, labels, groups=None, name="interactions", colors=None):
    """DOT digraph; seed edges bold black, derived edges red."""
    groups = dict(groups or {})
    node_groups = {}
    for x in sorted(graph.nodes):
        label = labels[x]
        if label not in groups:
            if groups:
                log.warning("no group for %r, using %r", label, NEUTRAL_GROUP)
            node_groups[x] = NEUTRAL_GROUP
        else:
            node_groups[x] = groups[label]
    colors = group_colors({**groups, **{labels[x]: g for x, g in node_groups.items()}}, colors)
    out = [f"digraph {_quote(name)} {{"]
    out.append(f"  graph [mode={_quote(graph.mode)}, source={_quote(graph.source_matrix)}, k={graph.k}];")
    for x in sorted(graph.nodes):
        g = node_groups[x]
        attrs = [f"group={_quote(g)}", "style=filled", f"fillcolor={_quote(colors[g])}"]
        if x in graph.seeds:
            attrs.append("penwidth=2")
        out.append(f"  {_quote(labels[x])} [{', '.join(attrs)}];")
    for a, b, level in graph.edges:
        style = "style=bold, color=black" if level == "seed" else "color=red"
        out.append(f"  {_quote(labels[a])} -> {_quote(labels[b])} [{style}, level={_quote(level)}];")
    out.append("}")
    return "\n".join(out) + "\n"


def interaction_json(graph, labels):
    return {
        "mode": graph.mode,
        "k": graph.k,
        "source_matrix": graph.source_matrix,
        "seeds": [labels[s] for s in graph.seeds],
        "nodes": [labels[x] for x in graph.nodes],
        "edges": [{"from": labels[a], "to": labels[b], "level": lvl} for a, b, lvl in graph.edges],
    }
