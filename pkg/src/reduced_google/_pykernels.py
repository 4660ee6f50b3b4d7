"""Numpy fallback for the compiled kernels in ``_ckernels.pyx``.

Same signatures and semantics; used when the extension is not built or
when ``REDUCED_GOOGLE_BACKEND=python`` is set.
"""

import numpy as np


def transition_matmat(indptr, indices, x):
    n, m = x.shape
    deg = np.diff(indptr)
    out = np.zeros((n, m))
    if n == 0:
        return out
    dangling = deg == 0
    scaled = np.zeros((n, m))
    np.divide(x, deg[:, None], out=scaled, where=~dangling[:, None])
    sources = np.repeat(np.arange(n), deg)
    contrib = scaled[sources]
    for c in range(m):
        out[:, c] = np.bincount(indices, weights=contrib[:, c], minlength=n)
    out += x[dangling].sum(axis=0) / n
    return out


def transition_rmatmat(indptr, indices, u):
    n, m = u.shape
    deg = np.diff(indptr)
    out = np.zeros((n, m))
    if n == 0:
        return out
    dangling = deg == 0
    nonempty = ~dangling
    if len(indices):
        gathered = u[indices]
        out[nonempty] = np.add.reduceat(gathered, indptr[:-1][nonempty], axis=0)
        out[nonempty] /= deg[nonempty, None]
    out[dangling] = u.sum(axis=0) / n
    return out


def surfer_walk(indptr, indices, alpha, coins, picks, start, counts):
    n = len(counts)
    node = int(start)
    ptr = indptr.tolist()
    idx = indices.tolist()
    tally = [0] * n
    for coin, pick in zip(coins.tolist(), picks.tolist()):
        lo = ptr[node]
        deg = ptr[node + 1] - lo
        if coin < alpha and deg > 0:
            node = idx[lo + int(pick * deg)]
        else:
            node = int(pick * n)
        tally[node] += 1
    counts += np.asarray(tally, dtype=counts.dtype)
    return node
