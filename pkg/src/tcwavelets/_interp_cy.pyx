# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled gather kernel for separable grid interpolation (1 to 4 axes).

Semantics must match tcwavelets._interp_py exactly: values outside the grid
count as zero, cubic uses a 4-point Lagrange stencil on nodes -1, 0, 1, 2.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor

cnp.import_array()


cdef inline void _weights(double frac, int order, double* w, int* lo) nogil:
    cdef double s = frac
    cdef double t2, t1, t0, m1, m2, m3
    if order == 1:
        lo[0] = 0
        w[0] = 1.0 - s
        w[1] = s
    elif order == 3:
        lo[0] = -1
        w[0] = -s * (s - 1.0) * (s - 2.0) / 6.0
        w[1] = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0
        w[2] = -(s + 1.0) * s * (s - 2.0) / 2.0
        w[3] = (s + 1.0) * s * (s - 1.0) / 6.0
    else:
        lo[0] = -2
        t2 = s + 2.0
        t1 = s + 1.0
        t0 = s
        m1 = s - 1.0
        m2 = s - 2.0
        m3 = s - 3.0
        w[0] = -t1 * t0 * m1 * m2 * m3 / 120.0
        w[1] = t2 * t0 * m1 * m2 * m3 / 24.0
        w[2] = -t2 * t1 * m1 * m2 * m3 / 12.0
        w[3] = t2 * t1 * t0 * m2 * m3 / 12.0
        w[4] = -t2 * t1 * t0 * m1 * m3 / 24.0
        w[5] = t2 * t1 * t0 * m1 * m2 / 120.0


def gather(cnp.ndarray values, cnp.ndarray pts, int order):
    """Sample `values` (complex, C-contiguous, ndim<=4) at fractional index
    coordinates `pts` of shape (m, ndim)."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] flat = np.ascontiguousarray(
        values, dtype=np.complex128).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=2] p = np.ascontiguousarray(
        pts, dtype=np.float64)
    cdef int ndim = values.ndim
    cdef Py_ssize_t m = p.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(m, dtype=np.complex128)

    cdef Py_ssize_t shape[4]
    cdef Py_ssize_t strides[4]
    cdef int ax
    cdef Py_ssize_t st = 1
    for ax in range(ndim):
        shape[ax] = values.shape[ax]
    for ax in range(ndim - 1, -1, -1):
        strides[ax] = st
        st *= shape[ax]

    cdef int ntap = 2 if order == 1 else (4 if order == 3 else 6)
    cdef double w[4][6]
    cdef Py_ssize_t base[4]
    cdef int lo[4]
    cdef Py_ssize_t i, idx
    cdef int i0, i1, i2, i3
    cdef Py_ssize_t j0, j1, j2, j3
    cdef double x, frac, wacc
    cdef double complex acc

    for i in range(m):
        for ax in range(ndim):
            x = p[i, ax]
            base[ax] = <Py_ssize_t>floor(x)
            frac = x - <double>base[ax]
            _weights(frac, order, &w[ax][0], &lo[ax])
        acc = 0
        if ndim == 1:
            for i0 in range(ntap):
                j0 = base[0] + lo[0] + i0
                if 0 <= j0 < shape[0] and w[0][i0] != 0.0:
                    acc = acc + w[0][i0] * flat[j0]
        elif ndim == 2:
            for i0 in range(ntap):
                j0 = base[0] + lo[0] + i0
                if j0 < 0 or j0 >= shape[0] or w[0][i0] == 0.0:
                    continue
                for i1 in range(ntap):
                    j1 = base[1] + lo[1] + i1
                    if 0 <= j1 < shape[1]:
                        acc = acc + w[0][i0] * w[1][i1] * flat[j0 * strides[0] + j1]
        elif ndim == 3:
            for i0 in range(ntap):
                j0 = base[0] + lo[0] + i0
                if j0 < 0 or j0 >= shape[0] or w[0][i0] == 0.0:
                    continue
                for i1 in range(ntap):
                    j1 = base[1] + lo[1] + i1
                    if j1 < 0 or j1 >= shape[1]:
                        continue
                    for i2 in range(ntap):
                        j2 = base[2] + lo[2] + i2
                        if 0 <= j2 < shape[2]:
                            acc = acc + w[0][i0] * w[1][i1] * w[2][i2] * flat[
                                j0 * strides[0] + j1 * strides[1] + j2]
        else:
            for i0 in range(ntap):
                j0 = base[0] + lo[0] + i0
                if j0 < 0 or j0 >= shape[0] or w[0][i0] == 0.0:
                    continue
                for i1 in range(ntap):
                    j1 = base[1] + lo[1] + i1
                    if j1 < 0 or j1 >= shape[1]:
                        continue
                    for i2 in range(ntap):
                        j2 = base[2] + lo[2] + i2
                        if j2 < 0 or j2 >= shape[2]:
                            continue
                        wacc = w[0][i0] * w[1][i1] * w[2][i2]
                        for i3 in range(ntap):
                            j3 = base[3] + lo[3] + i3
                            if 0 <= j3 < shape[3]:
                                acc = acc + wacc * w[3][i3] * flat[
                                    j0 * strides[0] + j1 * strides[1]
                                    + j2 * strides[2] + j3]
        out[i] = acc
    return out
