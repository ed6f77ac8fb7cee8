# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()


def best_split(const double[:, :] X, const int64_t[:] y, const int64_t[:, :] order,
               int n_classes, int min_leaf):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    cdef Py_ssize_t f, i, c
    cdef int64_t[:] total = np.zeros(n_classes, dtype=np.int64)
    cdef int64_t[:] left = np.zeros(n_classes, dtype=np.int64)
    cdef int64_t sq_left, sq_right, r, nl, nr
    cdef double score, best_score = -1.0, best_thr = 0.0, x0, x1
    cdef int best_f = -1
    cdef int64_t cls

    for i in range(n):
        total[y[i]] += 1

    for f in range(d):
        for c in range(n_classes):
            left[c] = 0
        for i in range(n - 1):
            cls = y[order[i, f]]
            left[cls] += 1
            nl = i + 1
            nr = n - nl
            if nl < min_leaf or nr < min_leaf:
                continue
            x0 = X[order[i, f], f]
            x1 = X[order[i + 1, f], f]
            if not (x0 < x1):
                continue
            sq_left = 0
            sq_right = 0
            for c in range(n_classes):
                sq_left += left[c] * left[c]
                r = total[c] - left[c]
                sq_right += r * r
            score = <double>sq_left / <double>nl + <double>sq_right / <double>nr
            if score > best_score:
                best_score = score
                best_f = f
                best_thr = 0.5 * (x0 + x1)
    return best_f, best_thr, best_score


def pairwise_distances(const double[:, :] A, const double[:, :] B, int metric):
    cdef Py_ssize_t n = A.shape[0], p = B.shape[0], d = A.shape[1]
    cdef Py_ssize_t i, k, j
    cdef double acc, diff
    out = np.empty((n, p), dtype=np.float64)
    cdef double[:, :] o = out
    for i in range(n):
        for k in range(p):
            acc = 0.0
            for j in range(d):
                diff = A[i, j] - B[k, j]
                if metric == 0:
                    acc += diff * diff
                else:
                    acc += fabs(diff)
            o[i, k] = sqrt(acc) if metric == 0 else acc
    return out


cdef int64_t _count_hits(uint64_t mask, int m, int k):
    # Gosper's hack over all k-bit subsets of m bits
    cdef uint64_t s, c, r, limit
    cdef int64_t hits = 0
    if k == 0:
        return 0
    s = (<uint64_t>1 << k) - 1
    limit = <uint64_t>1 << m
    while s < limit:
        if s & mask:
            hits += 1
        c = s & (~s + 1)
        r = s + c
        s = (((r ^ s) >> 2) // c) | r
    return hits


def subset_mismatch_counts(masks, int m, int k):
    cdef Py_ssize_t i, n = len(masks)
    out = np.zeros(n, dtype=np.int64)
    cdef int64_t[:] o = out
    cache = {}
    for i in range(n):
        key = int(masks[i])
        if key not in cache:
            cache[key] = _count_hits(<uint64_t>key, m, k)
        o[i] = cache[key]
    return out
