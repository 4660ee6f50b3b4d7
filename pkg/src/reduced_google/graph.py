"""Directed graphs, their transition matrix S and the Google matrix G.

Column ``j`` of the adjacency matrix is the out-link list of node ``j``,
so an edge line ``"j i"`` means page ``j`` points to page ``i``.
Dangling nodes (no out-links) have a uniform column 1/N in S.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .errors import GraphParseError, LabelResolutionError


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    """Immutable binary out-adjacency in compressed source-major form.

    ``indices[indptr[j]:indptr[j+1]]`` are the targets of node ``j``,
    sorted ascending, free of duplicates and self-loops.
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: tuple

    def __post_init__(self):
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)

    @classmethod
    def from_edges(cls, node_count, sources, targets, labels=None):
        """Build a graph, dropping self-loops and collapsing duplicate edges."""
        n = int(node_count)
        src = np.asarray(sources, dtype=np.int64).ravel()
        tgt = np.asarray(targets, dtype=np.int64).ravel()
        if src.shape != tgt.shape:
            raise ValueError("sources and targets differ in length")
        if len(src) and (min(src.min(), tgt.min()) < 0 or max(src.max(), tgt.max()) >= n):
            raise ValueError("edge endpoint outside [0, node_count)")
        keep = src != tgt
        key = np.unique(src[keep] * n + tgt[keep])
        src, tgt = key // n, key % n
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        if labels is None:
            labels = tuple(str(i) for i in range(n))
        labels = tuple(labels)
        if len(labels) != n:
            raise ValueError(f"expected {n} labels, got {len(labels)}")
        return cls(indptr, np.ascontiguousarray(tgt, dtype=np.int64), labels)

    @property
    def node_count(self):
        return len(self.indptr) - 1

    @property
    def edge_count(self):
        return len(self.indices)

    @property
    def out_degree(self):
        return np.diff(self.indptr)

    @property
    def in_degree(self):
        return np.bincount(self.indices, minlength=self.node_count)

    @property
    def dangling(self):
        """Sorted array of nodes without out-links."""
        return np.flatnonzero(self.out_degree == 0)

    def out_edges(self, j):
        return self.indices[self.indptr[j]:self.indptr[j + 1]]

    def edges(self):
        """Return (sources, targets) arrays, sorted by source then target."""
        return np.repeat(np.arange(self.node_count), self.out_degree), self.indices.copy()

    def label_index(self):
        return {label: i for i, label in enumerate(self.labels)}

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (
            self.labels == other.labels
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    __hash__ = None

    def __repr__(self):
        return f"DirectedGraph(N={self.node_count}, edges={self.edge_count}, dangling={len(self.dangling)})"


@dataclass(frozen=True)
class GoogleOperator:
    """Implicit Google matrix G = alpha * S + (1 - alpha) / N."""

    graph: DirectedGraph
    alpha: float = 0.85

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")

    @property
    def n(self):
        return self.graph.node_count

    def matmat(self, x):
        """G @ x for a 1-D vector or an (N, m) block; no precondition on x."""
        x, squeeze = _as_block(x, self.n)
        y = kernels.transition_matmat(self.graph.indptr, self.graph.indices, x)
        y *= self.alpha
        y += (1.0 - self.alpha) / self.n * x.sum(axis=0)
        return y[:, 0] if squeeze else y

    def rmatmat(self, u):
        """G.T @ u."""
        u, squeeze = _as_block(u, self.n)
        y = kernels.transition_rmatmat(self.graph.indptr, self.graph.indices, u)
        y *= self.alpha
        y += (1.0 - self.alpha) / self.n * u.sum(axis=0)
        return y[:, 0] if squeeze else y

    def column(self, j):
        """Dense column j of G."""
        col = np.full(self.n, (1.0 - self.alpha) / self.n)
        targets = self.graph.out_edges(j)
        if len(targets):
            col[targets] += self.alpha / len(targets)
        else:
            col += self.alpha / self.n
        return col


@dataclass(frozen=True)
class SubsetSelection:
    """Ordered subset of N_r nodes; the order fixes rows/columns of reduced matrices."""

    members: tuple
    labels: tuple = field(default=())
    node_count: int | None = None

    def __post_init__(self):
        members = tuple(int(m) for m in self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise ValueError("subset is empty")
        if len(set(members)) != len(members):
            raise ValueError("subset members are not distinct")
        if min(members) < 0:
            raise ValueError("negative node id in subset")
        # N_r < N is checked where a scattering space is needed (partition)
        if self.node_count is not None and max(members) >= self.node_count:
            raise ValueError("subset member outside the graph")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(m) for m in members))
        elif len(self.labels) != len(members):
            raise ValueError("labels and members differ in length")

    @classmethod
    def from_graph(cls, graph, members):
        members = [int(m) for m in members]
        return cls(tuple(members), tuple(graph.labels[m] for m in members), graph.node_count)

    def __len__(self):
        return len(self.members)

    @property
    def index(self):
        return np.asarray(self.members, dtype=np.int64)


def _as_block(x, n):
    x = np.asarray(x, dtype=np.float64)
    squeeze = x.ndim == 1
    if squeeze:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] != n:
        raise ValueError(f"dimension mismatch: expected {n} rows, got shape {x.shape}")
    return np.ascontiguousarray(x), squeeze


def _data_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_labels(text):
    """Parse an ``id<TAB>label`` table into a tuple of labels indexed by id.

    Ids must be exactly 0..n-1 (in any order).
    """
    table = {}
    for lineno, line in _data_lines(text):
        parts = line.split("\t") if "\t" in line else line.split(None, 1)
        if len(parts) != 2:
            raise GraphParseError("expected 'id<TAB>label'", lineno)
        try:
            node = int(parts[0])
        except ValueError:
            raise GraphParseError(f"node id {parts[0]!r} is not an integer", lineno) from None
        label = parts[1].strip()
        if node in table:
            raise GraphParseError(f"duplicate id {node}", lineno)
        table[node] = label
    if not table:
        raise GraphParseError("label table is empty")
    if sorted(table) != list(range(len(table))):
        raise GraphParseError("label ids must be exactly 0..n-1")
    labels = tuple(table[i] for i in range(len(table)))
    if len(set(labels)) != len(labels):
        raise GraphParseError("labels are not unique")
    return labels


def resolve_token(token, lookup, n, lineno=None):
    """Map a label or integer id to a node id."""
    if token in lookup:
        return lookup[token]
    try:
        node = int(token)
    except ValueError:
        raise LabelResolutionError(f"unknown label {token!r}", lineno) from None
    if not 0 <= node < n:
        raise LabelResolutionError(f"node id {node} outside [0, {n})", lineno)
    return node


def parse_edge_list(text, labels=None):
    """Parse ``source target`` lines into a :class:`DirectedGraph`.

    Without a label table the tokens must be non-negative integers and
    N = max id + 1.  With a label table (tuple, or the raw table text)
    tokens are labels or ids and N is the table size.
    """
    if isinstance(labels, str):
        labels = parse_labels(labels)
    lookup = {label: i for i, label in enumerate(labels)} if labels is not None else None
    sources, targets = [], []
    for lineno, line in _data_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(f"expected 2 tokens, got {len(parts)}", lineno)
        if lookup is None:
            try:
                s, t = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphParseError("non-integer node id (pass a label table)", lineno) from None
            if s < 0 or t < 0:
                raise GraphParseError("negative node id", lineno)
        else:
            s = resolve_token(parts[0], lookup, len(labels), lineno)
            t = resolve_token(parts[1], lookup, len(labels), lineno)
        sources.append(s)
        targets.append(t)
    if not sources:
        raise GraphParseError("edge list contains no edges")
    n = len(labels) if labels is not None else max(max(sources), max(targets)) + 1
    return DirectedGraph.from_edges(n, sources, targets, labels)


def parse_subset(text, graph):
    """Parse one label or id per line into an ordered :class:`SubsetSelection`."""
    lookup = graph.label_index()
    members = [resolve_token(line, lookup, graph.node_count, lineno) for lineno, line in _data_lines(text)]
    if not members:
        raise GraphParseError("subset file is empty")
    try:
        return SubsetSelection.from_graph(graph, members)
    except ValueError as exc:
        raise GraphParseError(str(exc)) from None


def reverse_graph(g):
    """Graph with every link inverted; labels are kept."""
    src, tgt = g.edges()
    return DirectedGraph.from_edges(g.node_count, tgt, src, g.labels)


def apply_transition(g, v):
    """S @ v, with dangling columns spread uniformly over all nodes."""
    x, squeeze = _as_block(v, g.node_count)
    y = kernels.transition_matmat(g.indptr, g.indices, x)
    return y[:, 0] if squeeze else y


def apply_google(op, v, atol=1e-12):
    """G @ v for a probability vector v."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (op.n,):
        raise ValueError(f"dimension mismatch: expected ({op.n},), got {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    if np.any(v < 0) or abs(v.sum() - 1.0) > atol:
        raise ValueError("expected a probability vector (v >= 0, sum 1)")
    return op.matmat(v)
