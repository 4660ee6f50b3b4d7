"""Friends and followers in a reduced matrix, and their closure graphs.

Friends of node j are the destinations of the strongest entries of
column j; followers are the origins of the strongest entries of row j.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

SEED = "seed"
DERIVED = "derived"


@dataclass
class InteractionGraph:
    """Directed edges over subset indices with seed/derived provenance.

    ``edges`` is a list of ``(src, dst, level)`` in insertion order and
    ``expanded`` lists nodes whose top-k edges were added, in order.
    """

    mode: str
    k: int
    source_matrix: str
    seeds: list
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    expanded: list = field(default_factory=list)

    def edge_set(self):
        return {(a, b) for a, b, _ in self.edges}


def _check_k(n, k):
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in [1, {n - 1}], got {k}")


def _tiebreak(n, order):
    if order is None:
        return np.arange(n)
    order = np.asarray(order)
    if order.shape != (n,):
        raise ValueError("tie-break key must have one entry per node")
    return order


def _top(values, j, k, order):
    n = len(values)
    _check_k(n, k)
    if not 0 <= j < n:
        raise IndexError(f"node index {j} outside [0, {n})")
    key = _tiebreak(n, order)
    cand = np.flatnonzero((np.arange(n) != j) & (values >= 0))
    ranked = cand[np.lexsort((key[cand], -values[cand]))][:k]
    return [(int(i), float(values[i])) for i in ranked]


def top_friends(M, j, k, order=None):
    """The ``k`` largest off-diagonal entries of column ``j``, descending.

    Ties go to the smaller value of ``order`` (the local PageRank index
    K; index order by default).  Negative entries are never selected, so
    the list is shorter than ``k`` if the column has fewer non-negative
    off-diagonal entries.
    """
    M = np.asarray(M)
    return _top(M[:, j], j, k, order)


def top_followers(M, j, k, order=None):
    """Same as :func:`top_friends` on row ``j``."""
    M = np.asarray(M)
    return _top(M[j, :], j, k, order)


def _edges_of(M, node, k, mode, order):
    if mode == "friends":
        return [(node, i) for i, _ in top_friends(M, node, k, order)]
    if mode == "followers":
        return [(i, node) for i, _ in top_followers(M, node, k, order)]
    raise ValueError(f"mode must be 'friends' or 'followers', got {mode!r}")


def _expand(graph, M, frontier, level, order):
    """Expand nodes in ``frontier``; return the newly reached nodes."""
    known = set(graph.nodes)
    present = graph.edge_set()
    reached = []
    for node in frontier:
        graph.expanded.append(node)
        for a, b in _edges_of(M, node, graph.k, graph.mode, order):
            if (a, b) in present:
                continue
            present.add((a, b))
            graph.edges.append((a, b, level))
            other = b if graph.mode == "friends" else a
            if other not in known:
                known.add(other)
                graph.nodes.append(other)
                reached.append(other)
    return reached


def _by_rank(nodes, order):
    if order is None:
        return sorted(nodes)
    return sorted(nodes, key=lambda x: (order[x], x))


def build_interaction_graph(M, seeds, k=4, mode="friends", order=None, source_matrix="gr"):
    """Top-k edges of the seeds, then of every node they reach, to a fixed point.

    Friends mode adds ``j -> friend`` edges, followers mode adds
    ``follower -> j`` edges.  Nodes are expanded in ascending ``order``
    (local PageRank index K); each node is expanded once.
    """
    M = np.asarray(M)
    n = M.shape[0]
    _check_k(n, k)
    seeds = list(dict.fromkeys(int(s) for s in seeds))
    if not seeds:
        raise ValueError("no seeds given")
    if min(seeds) < 0 or max(seeds) >= n:
        raise IndexError("seed outside the matrix")
    graph = InteractionGraph(mode, k, source_matrix, seeds, nodes=list(seeds))
    frontier = _expand(graph, M, _by_rank(seeds, order), SEED, order)
    while frontier:
        frontier = _expand(graph, M, _by_rank(frontier, order), DERIVED, order)
    return graph


def extend_closure(graph, M, order=None):
    """Re-check every node's top-k edges until a full pass adds nothing.

    Returns the number of edges added; zero for a closed graph.
    """
    M = np.asarray(M)
    added = 0
    while True:
        present = graph.edge_set()
        before = len(graph.edges)
        for node in _by_rank(list(graph.nodes), order):
            for a, b in _edges_of(M, node, graph.k, graph.mode, order):
                if (a, b) not in present:
                    present.add((a, b))
                    graph.edges.append((a, b, DERIVED))
            if node not in graph.expanded:
                graph.expanded.append(node)
        for a, b, _ in graph.edges[before:]:
            for x in (a, b):
                if x not in graph.nodes:
                    graph.nodes.append(x)
        if len(graph.edges) == before:
            return added
        added += len(graph.edges) - before


def cross_source_consensus(lists, m):
    """Members appearing in at least ``m`` of the given lists, with counts.

    Returned as ``[(member, count), ...]`` ordered by decreasing count,
    then first appearance.
    """
    lists = [list(dict.fromkeys(x)) for x in lists]
    if not lists:
        raise ValueError("need at least one list")
    if not 1 <= m <= len(lists):
        raise ValueError(f"m must lie in [1, {len(lists)}], got {m}")
    counts = Counter(x for lst in lists for x in lst)
    first = {}
    for lst in lists:
        for x in lst:
            first.setdefault(x, len(first))
    keep = [x for x in counts if counts[x] >= m]
    return [(x, counts[x]) for x in sorted(keep, key=lambda x: (-counts[x], first[x]))]
