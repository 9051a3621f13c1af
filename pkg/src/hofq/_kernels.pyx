# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled trace kernels; see _kernels_py for the call contracts."""

from libc.stdint cimport int64_t, INT64_MAX, INT64_MIN

OK = 0
DIED = 1
OVERFLOW = 2

IMPLEMENTATION = "cython"


def one_term_trace(const int64_t[::1] f, int64_t[::1] q):
    cdef Py_ssize_t n_max = f.shape[0]
    cdef Py_ssize_t n
    cdef int64_t prev, base, add
    cdef int status = 0
    cdef Py_ssize_t where = 0
    if n_max == 0:
        return OK, 0
    q[0] = 1
    with nogil:
        for n in range(2, n_max + 1):
            prev = q[n - 2]
            # lookup index n - prev in [1, n-1] iff prev in [1, n-1]
            if prev < 1 or prev > n - 1:
                status = 1
                where = n
                break
            base = q[n - prev - 1]
            add = f[n - 1]
            if (add > 0 and base > INT64_MAX - add) or \
               (add < 0 and base < INT64_MIN - add):
                status = 2
                where = n
                break
            q[n - 1] = base + add
    return status, where


def two_term_trace(int64_t[::1] q, Py_ssize_t n_init, int64_t start,
                   int64_t d1, int64_t d2, int64_t outer):
    cdef Py_ssize_t total = q.shape[0]
    cdef Py_ssize_t j
    cdef int64_t n, v1, v2, t1, t2
    cdef int status = 0
    cdef Py_ssize_t where = 0
    with nogil:
        for j in range(n_init, total):
            n = start + j
            v1 = q[j - d1]
            # arg = n - outer*d - v in [start, n-1] iff v in the band below;
            # testing v avoids int64 wrap when a stored value is extreme
            if v1 < 1 - outer * d1 or v1 > n - outer * d1 - start:
                status = 1
                where = n
                break
            v2 = q[j - d2]
            if v2 < 1 - outer * d2 or v2 > n - outer * d2 - start:
                status = 1
                where = n
                break
            t1 = q[n - outer * d1 - v1 - start]
            t2 = q[n - outer * d2 - v2 - start]
            if (t2 > 0 and t1 > INT64_MAX - t2) or \
               (t2 < 0 and t1 < INT64_MIN - t2):
                status = 2
                where = n
                break
            q[j] = t1 + t2
    return status, where
