"""Dense reference computations for small graphs.

Nothing here goes through the sparse operators: Google matrices are built
entry by entry from the edge lists and reduced matrices come from a direct
linear solve.  Results are used to validate the production path.
"""

from __future__ import annotations

import numpy as np

from ._backend import kernels
from .errors import OracleCapError
from .graph import DirectedGraph
from .ranking import RankVector

DENSE_CAP = 500
SURFER_BATCHES = 100


def _check_cap(n, cap):
    if n > cap:
        raise OracleCapError(f"N={n} exceeds the dense oracle cap of {cap}")


def dense_transition(g, cap=DENSE_CAP):
    """Explicit S with uniform 1/N columns for dangling nodes."""
    n = g.node_count
    _check_cap(n, cap)
    S = np.zeros((n, n))
    for j in range(n):
        targets = g.out_edges(j)
        if len(targets):
            for i in targets:
                S[i, j] = 1.0 / len(targets)
        else:
            S[:, j] = 1.0 / n
    return S


def dense_google(g, alpha=0.85, cap=DENSE_CAP):
    """Explicit N x N Google matrix."""
    return alpha * dense_transition(g, cap) + (1.0 - alpha) / g.node_count


def dense_pagerank(G):
    """Eigenvector of G for its eigenvalue closest to 1, scaled to unit sum."""
    vals, vecs = np.linalg.eig(G)
    k = int(np.argmin(np.abs(vals - 1.0)))
    v = np.real(vecs[:, k])
    return v / v.sum()


def _blocks(G, members):
    r = np.asarray(members, dtype=np.int64)
    mask = np.ones(G.shape[0], dtype=bool)
    mask[r] = False
    s = np.flatnonzero(mask)
    if len(s) == 0:
        raise ValueError("subset covers every node")
    return G[np.ix_(r, r)], G[np.ix_(r, s)], G[np.ix_(s, r)], G[np.ix_(s, s)]


def _members(subset):
    return getattr(subset, "members", subset)


def dense_reduced(G, subset):
    """G_rr + G_rs (1 - G_ss)^-1 G_sr by LU with partial pivoting."""
    Grr, Grs, Gsr, Gss = _blocks(G, _members(subset))
    A = np.eye(len(Gss)) - Gss
    try:
        X = np.linalg.solve(A, Gsr)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"1 - G_ss is singular: {exc}") from None
    return Grr + Grs @ X


def dense_series_reduced(G, subset, l_max):
    """Reduced matrix with the inverse replaced by sum_{l=0}^{l_max} G_ss^l."""
    Grr, Grs, Gsr, Gss = _blocks(G, _members(subset))
    term = Gsr.copy()
    acc = term.copy()
    for _ in range(l_max):
        term = Gss @ term
        acc += term
    return Grr + Grs @ acc


def dense_series_terms_needed(G, subset, tol=1e-12, l_max=1_000_000):
    """Terms of the raw series before every column meets the relative stop rule.

    Same rule as the deflated path: a column stops once the L1 norm of its
    current term is at most ``tol`` times that of its partial sum.
    """
    _, _, Gsr, Gss = _blocks(G, _members(subset))
    term = Gsr.copy()
    acc = term.copy()
    for l in range(l_max + 1):
        if np.all(np.abs(term).sum(axis=0) <= tol * np.abs(acc).sum(axis=0)):
            return l + 1
        term = Gss @ term
        acc += term
    return l_max + 1


def dense_decomposition(G, subset):
    """G_rr, G_pr, G_qr from a full eigen-decomposition of G_ss."""
    Grr, Grs, Gsr, Gss = _blocks(G, _members(subset))
    vals, right = np.linalg.eig(Gss)
    k = int(np.argmax(np.abs(vals)))
    lam = float(np.real(vals[k]))
    psi_R = np.real(right[:, k])
    psi_R /= psi_R.sum()
    lvals, left = np.linalg.eig(Gss.T)
    psi_L = np.real(left[:, int(np.argmax(np.abs(lvals)))])
    psi_L /= psi_L @ psi_R
    P = np.outer(psi_R, psi_L)
    inv = np.linalg.inv(np.eye(len(Gss)) - Gss)
    Gpr = Grs @ P @ Gsr / (1.0 - lam)
    Gqr = Grs @ (inv - P / (1.0 - lam)) @ Gsr
    return {"lambda_c": lam, "psi_R": psi_R, "psi_L": psi_L, "G_rr": Grr, "G_pr": Gpr, "G_qr": Gqr}


def random_surfer(g, alpha=0.85, steps=1_000_000, seed=0, batches=SURFER_BATCHES):
    """Visit frequencies of one long damped random walk.

    With probability ``alpha`` the surfer follows a uniformly chosen
    out-link (any node if dangling), otherwise it jumps to a uniformly
    chosen node.  The walk is split into ``batches`` consecutive batches;
    ``meta["standard_error"]`` is the batch-means standard error of every
    frequency, which accounts for correlation along the walk.
    """
    n = g.node_count
    rng = np.random.default_rng(seed)
    node = int(rng.random() * n)
    batches = max(1, min(batches, steps))
    sizes = np.full(batches, steps // batches)
    sizes[: steps % batches] += 1
    per_batch = np.zeros((batches, n))
    total = np.zeros(n, dtype=np.int64)
    for b, size in enumerate(sizes):
        coins = rng.random(size)
        picks = rng.random(size)
        counts = np.zeros(n, dtype=np.int64)
        node = kernels.surfer_walk(g.indptr, g.indices, float(alpha), coins, picks, node, counts)
        per_batch[b] = counts / size
        total += counts
    freq = total / steps
    if batches > 1:
        se = per_batch.std(axis=0, ddof=1) / np.sqrt(batches)
    else:
        se = np.sqrt(freq * (1 - freq) / steps)
    meta = {
        "seed": seed,
        "steps": steps,
        "batches": batches,
        "standard_error": se,
        "binomial_error": np.sqrt(freq * (1 - freq) / steps),
    }
    return RankVector(freq, "pagerank", steps, float("nan"), meta)


def random_graph(n, mean_degree=3.0, seed=0, dangling_fraction=0.1):
    """Sparse random digraph used by the test fixtures and the oracle command."""
    rng = np.random.default_rng(seed)
    degrees = rng.poisson(mean_degree, size=n)
    degrees[rng.random(n) < dangling_fraction] = 0
    degrees = np.minimum(degrees, n - 1)
    src = np.repeat(np.arange(n), degrees)
    tgt = np.concatenate([rng.choice(n, size=d, replace=False) for d in degrees]) if len(src) else src
    return DirectedGraph.from_edges(n, src, tgt)
