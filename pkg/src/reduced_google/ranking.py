"""PageRank, CheiRank and the local (K, K*) indices of a node subset."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError
from .graph import GoogleOperator, reverse_graph

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 1000


@dataclass(frozen=True)
class RankVector:
    probabilities: np.ndarray
    kind: str
    iterations_used: int
    final_residual: float
    meta: dict = field(default_factory=dict)

    def order(self):
        """Node ids by decreasing probability, ties by ascending id."""
        return rank_order(self.probabilities)

    def global_rank(self):
        """1-based rank K of every node."""
        ranks = np.empty(len(self.probabilities), dtype=np.int64)
        ranks[self.order()] = np.arange(1, len(self.probabilities) + 1)
        return ranks


@dataclass(frozen=True)
class LocalIndices:
    """Local PageRank index K and CheiRank index K* of each subset member.

    Both arrays follow the subset's member order.
    """

    members: tuple
    K: np.ndarray
    K_star: np.ndarray


def rank_order(values):
    values = np.asarray(values)
    return np.lexsort((np.arange(len(values)), -values))


def power_iteration(op, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, kind="pagerank"):
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    n = op.n
    p = np.full(n, 1.0 / n)
    residual = np.inf
    for it in range(1, max_iter + 1):
        nxt = op.matmat(p)
        nxt /= nxt.sum()
        residual = float(np.abs(nxt - p).sum())
        p = nxt
        if residual <= tol:
            return RankVector(p, kind, it, residual)
    raise ConvergenceError(
        f"{kind}: no convergence after {max_iter} iterations (residual {residual:.3e})",
        last_iterate=p,
        residual=residual,
        iterations=max_iter,
    )


def pagerank(op, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Stationary vector of G by power iteration from the uniform vector.

    Stops when the L1 change between successive iterates is at most
    ``tol``; raises :class:`ConvergenceError` after ``max_iter`` steps.
    """
    return power_iteration(op, tol, max_iter, "pagerank")


def cheirank(graph, alpha=0.85, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """PageRank of the graph with all links inverted."""
    op = GoogleOperator(reverse_graph(graph), alpha)
    return power_iteration(op, tol, max_iter, "cheirank")


def google_residual(op, p):
    """||G p - p||_1."""
    return float(np.abs(op.matmat(p) - p).sum())


def _local_rank(values, members):
    order = np.lexsort((members, -values))
    ranks = np.empty(len(values), dtype=np.int64)
    ranks[order] = np.arange(1, len(values) + 1)
    return ranks


def local_indices(p, p_star, subset):
    """Rank subset members by global PageRank (K) and CheiRank (K*).

    K = 1 goes to the member with the largest PageRank probability; ties
    are broken by ascending node id.
    """
    if len(p.probabilities) != len(p_star.probabilities):
        raise ValueError("rank vectors cover different node sets")
    members = subset.index
    return LocalIndices(
        subset.members,
        _local_rank(p.probabilities[members], members),
        _local_rank(p_star.probabilities[members], members),
    )


def nondominated_front(idx):
    """Members not beaten in both K and K* by any other member, sorted by K."""
    order = np.argsort(idx.K, kind="stable")
    front = []
    best_star = np.inf
    for pos in order:
        if idx.K_star[pos] <= best_star:
            front.append(idx.members[pos])
            best_star = min(best_star, idx.K_star[pos])
    return front
