# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: segment-cost table and the segmentation DP fill.

Operation-for-operation twin of ``dfrtok._kernels_py``; see that module for
the table and DP conventions.
"""

from libc.math cimport sqrt, INFINITY

import numpy as np


def cost_table(double[:, ::1] h, Py_ssize_t U):
    cdef Py_ssize_t T = h.shape[0]
    cdef Py_ssize_t dim = h.shape[1]
    out = np.zeros((T + 1, U + 1), dtype=np.float64)
    pair = np.zeros((T + 1, U + 1), dtype=np.float64)
    cdef double[:, ::1] L = out
    cdef double[:, ::1] P = pair
    cdef Py_ssize_t j, s, c, smax
    cdef double acc, diff, news
    if T < 2 or U < 2:
        return out
    for j in range(2, T + 1):
        news = 0.0
        smax = U if U < j else j
        for s in range(2, smax + 1):
            # distance from frame j to frame j-s+1 (1-based)
            acc = 0.0
            for c in range(dim):
                diff = h[j - 1, c] - h[j - s, c]
                acc += diff * diff
            news += sqrt(acc)
            P[j, s] = P[j - 1, s - 1] + news
            L[j, s] = P[j, s] / s
    return out


def dp_fill(double[:, ::1] L, Py_ssize_t T, Py_ssize_t Tp, Py_ssize_t U, bint pruned):
    dt = np.full((T + 1, Tp + 1), -np.inf)
    pv = np.zeros((T + 1, Tp + 1), dtype=np.int64)
    cdef double[:, ::1] d = dt
    cdef long long[:, ::1] prev = pv
    cdef Py_ssize_t i, j, s, lo, hi, t, smax
    cdef double base, score
    d[0, 0] = 0.0
    if pruned:
        for i in range(1, Tp + 1):
            for s in range(1, U + 1):
                lo = i
                if s > lo:
                    lo = s
                t = T - (Tp - i) * U
                if t > lo:
                    lo = t
                hi = T
                t = (i - 1) * U + s
                if t < hi:
                    hi = t
                t = T - (Tp - i)
                if t < hi:
                    hi = t
                for j in range(lo, hi + 1):
                    base = d[j - s, i - 1]
                    if base == -INFINITY:
                        continue
                    score = base - L[j, s]
                    if score > d[j, i]:
                        d[j, i] = score
                        prev[j, i] = s
    else:
        for j in range(1, T + 1):
            hi = j if j < Tp else Tp
            for i in range(1, hi + 1):
                smax = U if U < j - i + 1 else j - i + 1
                for s in range(1, smax + 1):
                    base = d[j - s, i - 1]
                    if base == -INFINITY:
                        continue
                    score = base - L[j, s]
                    if score > d[j, i]:
                        d[j, i] = score
                        prev[j, i] = s
    return dt, pv
