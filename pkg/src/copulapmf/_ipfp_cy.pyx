# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled IPFP inner loop (see _ipfp_py for the contract)."""

import numpy as np

cimport numpy as cnp


def ipfp_core(object x, object a, object b, double eps, int max_iter):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] cur = np.array(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] prev = np.array(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[:, :] c = cur
    cdef double[:, :] p = prev
    cdef double[:] am = av
    cdef double[:] bm = bv
    cdef Py_ssize_t r = cur.shape[0]
    cdef Py_ssize_t s = cur.shape[1]
    cdef Py_ssize_t i, j, it
    cdef double rowsum, colsum, scale, delta
    cdef int iterations = 0
    cdef bint converged = False

    delta = np.inf
    for it in range(max_iter):
        for i in range(r):
            rowsum = 0.0
            for j in range(s):
                rowsum += c[i, j]
            scale = am[i] / rowsum
            for j in range(s):
                c[i, j] *= scale
        for j in range(s):
            colsum = 0.0
            for i in range(r):
                colsum += c[i, j]
            scale = bm[j] / colsum
            for i in range(r):
                c[i, j] *= scale
        iterations += 1
        delta = 0.0
        for i in range(r):
            for j in range(s):
                delta += c[i, j] - p[i, j] if c[i, j] >= p[i, j] else p[i, j] - c[i, j]
        if delta <= eps:
            converged = True
            break
        for i in range(r):
            for j in range(s):
                p[i, j] = c[i, j]

    return cur, iterations, converged, delta
