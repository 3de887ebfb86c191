# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pairwise total-variation kernels.

Same API as ``_kernels_py``; ``kernels`` picks one at import time.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, NAN, isnan

cnp.import_array()

# ties with the incumbent are evaluated, so both backends prune identically
cdef double PRUNE_MARGIN = 1e-12


cdef inline double _tv(const double[:, ::1] rows, Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    cdef Py_ssize_t o
    cdef Py_ssize_t m = rows.shape[1]
    cdef double acc = 0.0
    for o in range(m):
        acc += fabs(rows[a, o] - rows[b, o])
    return 0.5 * acc


def max_pairwise_tv(const double[:, ::1] rows):
    """Largest tv between two distinct rows; returns ``(max_tv, evaluations)``."""
    cdef Py_ssize_t n = rows.shape[0]
    cdef Py_ssize_t a, b
    cdef double best = -1.0
    cdef double t
    cdef long evals = 0
    with nogil:
        for a in range(n):
            for b in range(a + 1, n):
                t = _tv(rows, a, b)
                evals += 1
                if t > best:
                    best = t
    return best, evals


def first_pair_at_least(const double[:, ::1] rows, double threshold):
    """Lexicographically first pair ``(a, b)`` with ``tv >= threshold``, or None."""
    cdef Py_ssize_t n = rows.shape[0]
    cdef Py_ssize_t a, b
    cdef Py_ssize_t fa = -1, fb = -1
    with nogil:
        for a in range(n):
            for b in range(a + 1, n):
                if _tv(rows, a, b) >= threshold:
                    fa = a
                    fb = b
                    break
            if fa >= 0:
                break
    if fa < 0:
        return None
    return int(fa), int(fb)


def pruned_max_tv(const double[:, ::1] rows):
    """Diameter search that skips pairs ruled out by the triangle inequality.

    Pair ``(a, b)`` is skipped when some anchor ``c < a`` with both
    distances known gives ``tv(c, a) + tv(c, b) < best - PRUNE_MARGIN``. Returns
    ``(max_tv, evaluations, dist)`` where ``dist`` holds evaluated tv values
    in its upper triangle and NaN for skipped pairs.
    """
    cdef Py_ssize_t n = rows.shape[0]
    cdef Py_ssize_t a, b, c
    cdef double best = -1.0
    cdef double t, dca, dcb
    cdef long evals = 0
    cdef bint skip
    dist_arr = np.full((n, n), np.nan)
    cdef double[:, ::1] dist = dist_arr
    with nogil:
        for a in range(n):
            for b in range(a + 1, n):
                skip = False
                for c in range(a):
                    dca = dist[c, a]
                    dcb = dist[c, b]
                    if isnan(dca) or isnan(dcb):
                        continue
                    if dca + dcb < best - PRUNE_MARGIN:
                        skip = True
                        break
                if skip:
                    continue
                t = _tv(rows, a, b)
                evals += 1
                dist[a, b] = t
                if t > best:
                    best = t
    return best, evals, dist_arr
