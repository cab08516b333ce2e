# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Mirrors ``_kernels_py`` operation for operation."""

import numpy as np
cimport numpy as cnp
from libcpp.queue cimport priority_queue
from libcpp.pair cimport pair
from libcpp.vector cimport vector

cnp.import_array()

cdef double EPS = 1e-12

BACKEND = "cython"


def merge_close(positions, double min_cell):
    cdef double[::1] pos = np.ascontiguousarray(positions, dtype=np.float64)
    cdef Py_ssize_t n = pos.shape[0]
    labels_arr = np.zeros(n, dtype=np.int64)
    if n == 0:
        return labels_arr, np.zeros(0)
    cdef cnp.int64_t[::1] labels = labels_arr
    cdef double thr = min_cell * (1.0 - EPS)
    cdef vector[double] total = vector[double](n)
    cdef vector[Py_ssize_t] count = vector[Py_ssize_t](n, 1)
    cdef vector[Py_ssize_t] right = vector[Py_ssize_t](n)
    cdef vector[Py_ssize_t] left = vector[Py_ssize_t](n)
    cdef vector[char] alive = vector[char](n, 1)
    # max-heap on (-gap, -i) pops the smallest gap, leftmost first
    cdef priority_queue[pair[double, Py_ssize_t]] heap
    cdef pair[double, Py_ssize_t] top
    cdef Py_ssize_t i, j, k, h, idx, c, nc = 0
    cdef double gap, g, ci

    with nogil:
        for i in range(n):
            total[i] = pos[i]
            right[i] = i + 1 if i + 1 < n else -1
            left[i] = i - 1
        for i in range(n - 1):
            gap = pos[i + 1] - pos[i]
            if gap < thr:
                heap.push(pair[double, Py_ssize_t](-gap, -i))

        while not heap.empty():
            top = heap.top()
            heap.pop()
            gap = -top.first
            i = -top.second
            if not alive[i]:
                continue
            j = right[i]
            if j < 0 or (total[j] / count[j]) - (total[i] / count[i]) != gap:
                continue
            total[i] = total[i] + total[j]
            count[i] += count[j]
            alive[j] = 0
            k = right[j]
            right[i] = k
            if k >= 0:
                left[k] = i
            ci = total[i] / count[i]
            h = left[i]
            if h >= 0:
                g = ci - total[h] / count[h]
                if g < thr:
                    heap.push(pair[double, Py_ssize_t](-g, -h))
            if k >= 0:
                g = total[k] / count[k] - ci
                if g < thr:
                    heap.push(pair[double, Py_ssize_t](-g, -i))

        for idx in range(n):
            if alive[idx]:
                nc += 1

    cent_arr = np.empty(nc, dtype=np.float64)
    cdef double[::1] cent = cent_arr
    c = -1
    with nogil:
        for idx in range(n):
            if alive[idx]:
                c += 1
                cent[c] = total[idx] / count[idx]
            labels[idx] = c
    return labels_arr, cent_arr


def grading_levels(sizes, double r_max, double min_cell, frozen):
    cdef double[::1] d = np.array(sizes, dtype=np.float64, copy=True)
    cdef Py_ssize_t n = d.shape[0]
    lev_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] lev = lev_arr
    cdef cnp.uint8_t[::1] fz = np.ascontiguousarray(frozen, dtype=np.uint8)
    cdef double floor = min_cell * (1.0 - EPS)
    cdef double r = r_max * (1.0 + EPS)
    cdef bint changed = True
    cdef Py_ssize_t i
    with nogil:
        while changed:
            changed = False
            for i in range(1, n):
                while not fz[i] and d[i] > r * d[i - 1] and d[i] * 0.5 >= floor:
                    d[i] *= 0.5
                    lev[i] += 1
                    changed = True
            i = n - 2
            while i >= 0:
                while not fz[i] and d[i] > r * d[i + 1] and d[i] * 0.5 >= floor:
                    d[i] *= 0.5
                    lev[i] += 1
                    changed = True
                i -= 1
    return lev_arr
