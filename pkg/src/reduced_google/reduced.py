"""Reduced Google matrix of a node subset and its three-part decomposition.

With the nodes split into the subset ``r`` and the scattering set ``s``,

    G_R = G_rr + G_rs (1 - G_ss)^-1 G_sr = G_rr + G_pr + G_qr

where G_pr is the contribution of the leading eigenvector of G_ss
(rank one, taken out analytically) and G_qr is the remainder, summed as
a fast-converging series in the complementary projected space.  The
scattering block is only ever touched through matrix-vector products
with the implicit Google operator.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, ConvergenceError, DegeneracyError, SingularityError

log = logging.getLogger(__name__)

DEFLATION_TOL = 1e-12
DEFLATION_MAX_ITER = 10000
SERIES_TOL = 1e-12
SERIES_L_MAX = 10000
SINGULAR_MARGIN = 1e-14
DEGENERACY_TOL = 1e-8
COLUMN_SUM_TOL = 1e-8


class SeriesTruncationWarning(RuntimeWarning):
    pass


@dataclass(frozen=True, eq=False)
class BlockPartition:
    """The four blocks of G for a subset; G_rr dense, the rest as operators."""

    op: object
    subset: object
    r_index: np.ndarray
    s_index: np.ndarray
    G_rr: np.ndarray

    @property
    def n_r(self):
        return len(self.r_index)

    @property
    def n_s(self):
        return len(self.s_index)

    def _embed(self, x, rows):
        x = np.asarray(x, dtype=np.float64)
        full = np.zeros((self.op.n,) + x.shape[1:])
        full[rows] = x
        return full

    def apply_rs(self, x_s):
        """G_rs @ x_s."""
        return self.op.matmat(self._embed(x_s, self.s_index))[self.r_index]

    def apply_sr(self, x_r):
        """G_sr @ x_r."""
        return self.op.matmat(self._embed(x_r, self.r_index))[self.s_index]

    def apply_ss(self, x_s):
        """G_ss @ x_s."""
        return self.op.matmat(self._embed(x_s, self.s_index))[self.s_index]

    def rapply_ss(self, u_s):
        """G_ss.T @ u_s."""
        return self.op.rmatmat(self._embed(u_s, self.s_index))[self.s_index]

    def rapply_sr(self, u_s):
        """G_sr.T @ u_s."""
        return self.op.rmatmat(self._embed(u_s, self.s_index))[self.r_index]


@dataclass(frozen=True, eq=False)
class DeflationData:
    lambda_c: float
    psi_R: np.ndarray
    psi_L: np.ndarray
    iterations_used: tuple
    residual_R: float
    residual_L: float
    lambda_right: float
    lambda_left: float


@dataclass(frozen=True, eq=False)
class ReducedDecomposition:
    subset: object
    G_R: np.ndarray
    G_rr: np.ndarray
    G_pr: np.ndarray
    G_qr: np.ndarray
    G_qrd: np.ndarray
    G_qrnd: np.ndarray
    W_rr: float
    W_pr: float
    W_qr: float
    negative_weight: float
    lambda_c: float
    series_terms_used: int
    series_truncated: bool = False
    deflation: DeflationData | None = None
    term_norms: np.ndarray | None = field(default=None, repr=False)

    @property
    def weights(self):
        return {"W_rr": self.W_rr, "W_pr": self.W_pr, "W_qr": self.W_qr}

    def matrices(self):
        return {
            "gr": self.G_R,
            "grr": self.G_rr,
            "gpr": self.G_pr,
            "gqr": self.G_qr,
            "gqrd": self.G_qrd,
            "gqrnd": self.G_qrnd,
        }


def partition(op, subset):
    """Split G into blocks for ``subset``; only G_rr is materialized."""
    n = op.n
    r_index = subset.index
    if r_index.min() < 0 or r_index.max() >= n:
        raise ValueError("subset member outside the graph")
    if len(np.unique(r_index)) != len(r_index):
        raise ValueError("subset members are not distinct")
    if len(r_index) >= n:
        raise ValueError("subset covers every node: the scattering space is empty")
    mask = np.ones(n, dtype=bool)
    mask[r_index] = False
    s_index = np.flatnonzero(mask)
    G_rr = np.empty((len(r_index), len(r_index)))
    for c, j in enumerate(r_index):
        G_rr[:, c] = op.column(j)[r_index]
    G_rr.setflags(write=False)
    return BlockPartition(op, subset, r_index, s_index, G_rr)


def _power(apply, n_s, tol, max_iter, what):
    v = np.full(n_s, 1.0 / n_s)
    growth = 0.0
    diff = np.inf
    for it in range(1, max_iter + 1):
        w = apply(v)
        growth = w.sum()
        if not growth > 0:
            raise ConvergenceError(f"{what}: iterate collapsed to zero", last_iterate=v, iterations=it)
        w /= growth
        diff = float(np.abs(w - v).sum())
        v = w
        if diff <= tol:
            return v, float(growth), it
    raise ConvergenceError(
        f"{what}: no convergence after {max_iter} iterations (change {diff:.3e})",
        last_iterate=v,
        residual=diff,
        iterations=max_iter,
    )


def leading_eigentriple(bp, tol=DEFLATION_TOL, max_iter=DEFLATION_MAX_ITER):
    """Leading eigenvalue and right/left eigenvectors of G_ss.

    psi_R is scaled to unit sum and psi_L so that psi_L . psi_R = 1.
    """
    n_s = bp.n_s
    psi_R, lam_R, it_R = _power(bp.apply_ss, n_s, tol, max_iter, "right eigenvector of G_ss")
    psi_L, lam_L, it_L = _power(bp.rapply_ss, n_s, tol, max_iter, "left eigenvector of G_ss")
    if abs(lam_R - lam_L) > DEGENERACY_TOL:
        raise DegeneracyError(
            f"left/right leading eigenvalues of G_ss disagree: {lam_R!r} vs {lam_L!r}",
            residual=abs(lam_R - lam_L),
        )
    Gpsi_R = bp.apply_ss(psi_R)
    psi_L = psi_L / psi_L.dot(psi_R)
    lam = float(psi_L.dot(Gpsi_R))
    if lam >= 1.0 - SINGULAR_MARGIN:
        raise SingularityError(f"leading eigenvalue of G_ss is {lam!r}; 1 - G_ss is singular")
    res_R = float(np.abs(Gpsi_R - lam * psi_R).sum())
    res_L = float(np.abs(bp.rapply_ss(psi_L) - lam * psi_L).sum() / np.abs(psi_L).sum())
    return DeflationData(lam, psi_R, psi_L, (it_R, it_L), res_R, res_L, lam_R, lam_L)


def compute_gpr(bp, defl):
    """Projector component (G_rs psi_R)(psi_L^T G_sr) / (1 - lambda_c)."""
    if defl.lambda_c >= 1.0 - SINGULAR_MARGIN:
        raise SingularityError(f"lambda_c = {defl.lambda_c!r} is numerically 1")
    left = bp.apply_rs(defl.psi_R)
    right = bp.rapply_sr(defl.psi_L)
    return np.outer(left, right) / (1.0 - defl.lambda_c)


def compute_gqr(bp, defl, series_tol=SERIES_TOL, l_max=SERIES_L_MAX, return_norms=False):
    """Hidden-link component G_rs [Q_c sum_l (Q_c G_ss Q_c)^l] G_sr.

    All N_r columns are iterated together as one block.  A column stops
    accumulating once the L1 norm of its current term falls to
    ``series_tol`` times the L1 norm of its partial sum.

    Returns ``(G_qr, terms_used)`` or, with ``return_norms``, also the
    per-term L1 norms (shape (terms, N_r), NaN once a column stopped).
    A :class:`SeriesTruncationWarning` is emitted when ``l_max`` is hit.
    """
    psi_R, psi_L = defl.psi_R, defl.psi_L

    def project(x):
        return x - np.outer(psi_R, psi_L @ x)

    n_r = bp.n_r
    term = project(bp.apply_sr(np.eye(n_r)))
    acc = term.copy()
    active = np.ones(n_r, dtype=bool)
    norms = [np.abs(term).sum(axis=0)]
    terms = np.zeros(n_r, dtype=np.int64)
    l = 0
    while True:
        acc_norm = np.abs(acc[:, active]).sum(axis=0)
        cur = norms[-1][active]
        done = cur <= series_tol * acc_norm
        idx = np.flatnonzero(active)
        active[idx[done]] = False
        terms[idx[done]] = l + 1
        if not active.any() or l >= l_max:
            break
        l += 1
        cols = np.flatnonzero(active)
        step = project(bp.apply_ss(project(term[:, cols])))
        term[:, cols] = step
        acc[:, cols] += step
        row = np.full(n_r, np.nan)
        row[cols] = np.abs(step).sum(axis=0)
        norms.append(row)
    truncated = bool(active.any())
    if truncated:
        terms[active] = l + 1
        worst = float(np.nanmax(norms[-1] / np.abs(acc).sum(axis=0)))
        warnings.warn(
            f"hidden-link series truncated at l_max={l_max} (relative term norm {worst:.3e})",
            SeriesTruncationWarning,
            stacklevel=2,
        )
    G_qr = bp.apply_rs(acc)
    terms_used = int(terms.max())
    if return_norms:
        return G_qr, terms_used, np.vstack(norms), truncated
    return G_qr, terms_used


def assemble(bp, gpr, gqr, lambda_c=float("nan"), terms_used=0, **extra):
    """Sum the three components and derive weights and diagnostics.

    Raises :class:`ConsistencyError` if a column of G_R does not sum to 1
    within 1e-8, which means an upstream iteration did not converge.
    """
    G_rr = np.array(bp.G_rr)
    if not (G_rr.shape == gpr.shape == gqr.shape):
        raise ValueError("component shapes differ")
    G_R = G_rr + gpr + gqr
    n_r = bp.n_r
    col_dev = float(np.abs(G_R.sum(axis=0) - 1.0).max())
    if col_dev > COLUMN_SUM_TOL:
        raise ConsistencyError(f"G_R column sums deviate from 1 by {col_dev:.3e}")
    if G_R.min() < -COLUMN_SUM_TOL:
        raise ConsistencyError(f"G_R has a negative entry {G_R.min():.3e}")
    G_qrd = np.diag(np.diag(gqr))
    G_qrnd = gqr - G_qrd
    return ReducedDecomposition(
        subset=bp.subset,
        G_R=G_R,
        G_rr=G_rr,
        G_pr=gpr,
        G_qr=gqr,
        G_qrd=G_qrd,
        G_qrnd=G_qrnd,
        W_rr=float(G_rr.sum() / n_r),
        W_pr=float(gpr.sum() / n_r),
        W_qr=float(gqr.sum() / n_r),
        negative_weight=float(-gqr[gqr < 0].sum() / n_r),
        lambda_c=float(lambda_c),
        series_terms_used=int(terms_used),
        **extra,
    )


def reduce(op, subset, deflation_tol=DEFLATION_TOL, deflation_max_iter=DEFLATION_MAX_ITER,
           series_tol=SERIES_TOL, l_max=SERIES_L_MAX):
    """Full pipeline: partition, deflate, both indirect components, assemble."""
    bp = partition(op, subset)
    defl = leading_eigentriple(bp, deflation_tol, deflation_max_iter)
    log.info("lambda_c = %.15f after %s iterations", defl.lambda_c, defl.iterations_used)
    gpr = compute_gpr(bp, defl)
    gqr, terms, norms, truncated = compute_gqr(bp, defl, series_tol, l_max, return_norms=True)
    return assemble(
        bp, gpr, gqr, defl.lambda_c, terms,
        series_truncated=truncated, deflation=defl, term_norms=norms,
    )


def reduced_pagerank_residual(decomp, p_global, subset=None):
    """||G_R P_r - P_r||_1 / ||P_r||_1 for the raw restriction P_r."""
    subset = subset if subset is not None else decomp.subset
    probs = getattr(p_global, "probabilities", p_global)
    p_r = np.asarray(probs)[subset.index]
    return float(np.abs(decomp.G_R @ p_r - p_r).sum() / np.abs(p_r).sum())


def projector_pagerank_cosine(decomp, p_global):
    """Cosine similarity of every G_pr column with the restricted PageRank."""
    probs = getattr(p_global, "probabilities", p_global)
    p_r = np.asarray(probs)[decomp.subset.index]
    cols = decomp.G_pr
    return cols.T @ p_r / (np.linalg.norm(cols, axis=0) * np.linalg.norm(p_r))


def max_rank_one_minor(m):
    """Largest |m[i,k] m[j,l] - m[i,l] m[j,k]| over all 2x2 minors."""
    m = np.asarray(m)
    worst = 0.0
    for i in range(m.shape[0]):
        minors = np.einsum("k,jl->jkl", m[i], m) - np.einsum("l,jk->jkl", m[i], m)
        worst = max(worst, float(np.abs(minors).max()))
    return worst
