# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scoring kernels: LCS length and sorted multiset intersection.

Mirrors podsum._kernels_py exactly; operates on int64 id arrays.
"""

from libc.stdlib cimport free, malloc

BACKEND = "cython"


def lcs_length(const long long[:] a, const long long[:] b):
    """Length of the longest common subsequence of two id sequences."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = b.shape[0]
    if n == 0 or m == 0:
        return 0
    cdef long long *prev = <long long *> malloc((m + 1) * sizeof(long long))
    cdef long long *cur = <long long *> malloc((m + 1) * sizeof(long long))
    if prev == NULL or cur == NULL:
        free(prev)
        free(cur)
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef long long ai, up, left, result
    cdef long long *tmp
    with nogil:
        for j in range(m + 1):
            prev[j] = 0
            cur[j] = 0
        for i in range(n):
            ai = a[i]
            cur[0] = 0
            for j in range(m):
                if ai == b[j]:
                    cur[j + 1] = prev[j] + 1
                else:
                    up = prev[j + 1]
                    left = cur[j]
                    cur[j + 1] = up if up >= left else left
            tmp = prev
            prev = cur
            cur = tmp
        result = prev[m]
    free(prev)
    free(cur)
    return result


def sorted_overlap(const long long[:] a, const long long[:] b):
    """Multiset intersection size of two sorted id sequences."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = b.shape[0]
    cdef Py_ssize_t i = 0, j = 0
    cdef long long count = 0
    with nogil:
        while i < n and j < m:
            if a[i] == b[j]:
                count += 1
                i += 1
                j += 1
            elif a[i] < b[j]:
                i += 1
            else:
                j += 1
    return count
