# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sparse kernels over the out-adjacency of a directed graph.

The graph is stored source-major: targets of node j are
``indices[indptr[j]:indptr[j + 1]]``.  Blocks of vectors are 2-D arrays
of shape (N, m), one column per vector.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def transition_matmat(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
                      const double[:, ::1] x):
    """Return S @ x where S is the column-stochastic transition matrix.

    Dangling columns are uniform 1/N and are applied as a rank-one
    correction, never materialized.
    """
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t m = x.shape[1]
    cdef Py_ssize_t j, e, c, t, deg
    cdef double inv
    out_arr = np.zeros((n, m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    dsum_arr = np.zeros(m, dtype=np.float64)
    cdef double[::1] dsum = dsum_arr

    for j in range(n):
        deg = indptr[j + 1] - indptr[j]
        if deg == 0:
            for c in range(m):
                dsum[c] += x[j, c]
            continue
        inv = 1.0 / deg
        for e in range(indptr[j], indptr[j + 1]):
            t = indices[e]
            for c in range(m):
                out[t, c] += x[j, c] * inv
    if n > 0:
        for c in range(m):
            dsum[c] /= n
        for j in range(n):
            for c in range(m):
                out[j, c] += dsum[c]
    return out_arr


def transition_rmatmat(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
                       const double[:, ::1] u):
    """Return S.T @ u."""
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t m = u.shape[1]
    cdef Py_ssize_t j, e, c, deg
    cdef double inv
    out_arr = np.zeros((n, m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    tot_arr = np.zeros(m, dtype=np.float64)
    cdef double[::1] tot = tot_arr

    for j in range(n):
        for c in range(m):
            tot[c] += u[j, c]
    if n > 0:
        for c in range(m):
            tot[c] /= n
    for j in range(n):
        deg = indptr[j + 1] - indptr[j]
        if deg == 0:
            for c in range(m):
                out[j, c] = tot[c]
            continue
        for e in range(indptr[j], indptr[j + 1]):
            for c in range(m):
                out[j, c] += u[indices[e], c]
        inv = 1.0 / deg
        for c in range(m):
            out[j, c] *= inv
    return out_arr


def surfer_walk(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices, double alpha,
                const double[::1] coins, const double[::1] picks,
                cnp.int64_t start, cnp.int64_t[::1] counts):
    """Advance a damped random surfer one step per (coin, pick) pair.

    Each visited node (after the step) is tallied in ``counts``.
    Returns the final node.
    """
    cdef Py_ssize_t n = counts.shape[0]
    cdef Py_ssize_t steps = coins.shape[0]
    cdef Py_ssize_t t, deg
    cdef cnp.int64_t node = start
    for t in range(steps):
        deg = indptr[node + 1] - indptr[node]
        if coins[t] < alpha and deg > 0:
            node = indices[indptr[node] + <Py_ssize_t>(picks[t] * deg)]
        else:
            node = <cnp.int64_t>(picks[t] * n)
        counts[node] += 1
    return node
