# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: windowed convolution and shift-max scans.

Semantics match ``_fallback`` exactly (zero extension, fixed summation
order), so the two backends agree to floating-point rounding.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def conv1d(const double[::1] values, const double[::1] weights):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t m = weights.shape[0]
    cdef Py_ssize_t half = m // 2
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, k, j
    cdef double acc
    for i in range(n):
        acc = 0.0
        for k in range(m):
            j = i + k - half
            if 0 <= j < n:
                acc += weights[k] * values[j]
        o[i] = acc
    return out


def conv_axis(const double[:, ::1] arr, const double[::1] weights, int axis):
    cdef cnp.ndarray[double, ndim=2] out = np.empty((arr.shape[0], arr.shape[1]), dtype=np.float64)
    cdef Py_ssize_t nr = arr.shape[0]
    cdef Py_ssize_t nc = arr.shape[1]
    cdef Py_ssize_t m = weights.shape[0]
    cdef Py_ssize_t half = m // 2
    cdef Py_ssize_t r, c, k, j
    cdef double acc
    if axis == 1:
        for r in range(nr):
            for c in range(nc):
                acc = 0.0
                for k in range(m):
                    j = c + k - half
                    if 0 <= j < nc:
                        acc += weights[k] * arr[r, j]
                out[r, c] = acc
    else:
        for c in range(nc):
            for r in range(nr):
                acc = 0.0
                for k in range(m):
                    j = r + k - half
                    if 0 <= j < nr:
                        acc += weights[k] * arr[j, c]
                out[r, c] = acc
    return out


def shift_max_1d(const double[::1] values, const cnp.int64_t[::1] offsets, const double[::1] penalties):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t m = offsets.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.full(n, -np.inf)
    cdef double[::1] o = out
    cdef Py_ssize_t i, k
    cdef cnp.int64_t off
    cdef double pen, v
    for k in range(m):
        off = offsets[k]
        pen = penalties[k]
        for i in range(n):
            if 0 <= i + off < n:
                v = values[i + off] - pen
            else:
                v = -pen
            if v > o[i]:
                o[i] = v
    return out


def shift_max_2d(const double[:, ::1] values, const cnp.int64_t[::1] row_offsets,
                 const cnp.int64_t[::1] col_offsets, const double[::1] penalties):
    cdef Py_ssize_t nr = values.shape[0]
    cdef Py_ssize_t nc = values.shape[1]
    cdef Py_ssize_t m = row_offsets.shape[0]
    cdef cnp.ndarray[double, ndim=2] out = np.full((nr, nc), -np.inf)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t r, c, k
    cdef cnp.int64_t orow, ocol
    cdef double pen, v
    for k in range(m):
        orow = row_offsets[k]
        ocol = col_offsets[k]
        pen = penalties[k]
        for r in range(nr):
            for c in range(nc):
                if 0 <= r + orow < nr and 0 <= c + ocol < nc:
                    v = values[r + orow, c + ocol] - pen
                else:
                    v = -pen
                if v > o[r, c]:
                    o[r, c] = v
    return out


def shift_interp_max_1d(const double[::1] values, const cnp.int64_t[::1] offsets,
                        const double[::1] fracs, const double[::1] penalties):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t m = offsets.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.full(n, -np.inf)
    cdef double[::1] o = out
    cdef Py_ssize_t i, k
    cdef cnp.int64_t off
    cdef double pen, frac, lo, hi, v
    for k in range(m):
        off = offsets[k]
        frac = fracs[k]
        pen = penalties[k]
        for i in range(n):
            lo = values[i + off] if 0 <= i + off < n else 0.0
            hi = values[i + off + 1] if 0 <= i + off + 1 < n else 0.0
            v = (1.0 - frac) * lo + frac * hi - pen
            if v > o[i]:
                o[i] = v
    return out


cdef inline double _at2(const double[:, ::1] values, Py_ssize_t r, Py_ssize_t c,
                        Py_ssize_t nr, Py_ssize_t nc) nogil:
    if 0 <= r < nr and 0 <= c < nc:
        return values[r, c]
    return 0.0


def shift_interp_max_2d(const double[:, ::1] values, const cnp.int64_t[::1] row_offsets,
                        const cnp.int64_t[::1] col_offsets, const double[::1] row_fracs,
                        const double[::1] col_fracs, const double[::1] penalties):
    cdef Py_ssize_t nr = values.shape[0]
    cdef Py_ssize_t nc = values.shape[1]
    cdef Py_ssize_t m = row_offsets.shape[0]
    cdef cnp.ndarray[double, ndim=2] out = np.full((nr, nc), -np.inf)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t r, c, k
    cdef cnp.int64_t orow, ocol
    cdef double pen, fr, fc, v, cand
    for k in range(m):
        orow = row_offsets[k]
        ocol = col_offsets[k]
        fr = row_fracs[k]
        fc = col_fracs[k]
        pen = penalties[k]
        for r in range(nr):
            for c in range(nc):
                cand = (1.0 - fr) * (1.0 - fc) * _at2(values, r + orow, c + ocol, nr, nc)
                cand += fr * (1.0 - fc) * _at2(values, r + orow + 1, c + ocol, nr, nc)
                cand += (1.0 - fr) * fc * _at2(values, r + orow, c + ocol + 1, nr, nc)
                cand += fr * fc * _at2(values, r + orow + 1, c + ocol + 1, nr, nc)
                v = cand - pen
                if v > o[r, c]:
                    o[r, c] = v
    return out
