# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-iteration kernels for the iterative FAMD loop.

Same signatures and results as ``_pykernels``; each call fuses what the
numpy version does in several array passes.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def column_moments(const double[:, ::1] x):
    cdef Py_ssize_t n = x.shape[0], p = x.shape[1], i, j
    mean_a = np.zeros(p)
    var_a = np.zeros(p)
    cdef double[::1] mean = mean_a
    cdef double[::1] var = var_a
    cdef double d
    with nogil:
        for i in range(n):
            for j in range(p):
                mean[j] += x[i, j]
        for j in range(p):
            mean[j] /= n
        for i in range(n):
            for j in range(p):
                d = x[i, j] - mean[j]
                var[j] += d * d
        for j in range(p):
            var[j] /= n
    return mean_a, var_a


def center(const double[:, ::1] x, const double[::1] sqrt_d, const double[::1] m):
    cdef Py_ssize_t n = x.shape[0], p = x.shape[1], i, j
    z_a = np.empty((n, p))
    cdef double[:, ::1] z = z_a
    with nogil:
        for i in range(n):
            for j in range(p):
                z[i, j] = x[i, j] / sqrt_d[j] - m[j]
    return z_a


def reconstruct_blend(const double[:, ::1] us, const double[:, ::1] vt,
                      const double[::1] m, const double[::1] sqrt_d,
                      const double[:, ::1] x, const double[:, ::1] w,
                      xhat_prev):
    cdef Py_ssize_t n = x.shape[0], p = x.shape[1], r = us.shape[1], i, j, s
    xhat_a = np.empty((n, p))
    xnew_a = np.empty((n, p))
    cdef double[:, ::1] xhat = xhat_a
    cdef double[:, ::1] xnew = xnew_a
    cdef const double[:, ::1] prev
    cdef bint has_prev = xhat_prev is not None
    cdef double acc, d, change = 0.0
    if has_prev:
        prev = np.ascontiguousarray(xhat_prev, dtype=np.float64)
    with nogil:
        for i in range(n):
            for j in range(p):
                acc = m[j]
                for s in range(r):
                    acc = acc + us[i, s] * vt[s, j]
                acc = acc * sqrt_d[j]
                xhat[i, j] = acc
                xnew[i, j] = w[i, j] * x[i, j] + (1.0 - w[i, j]) * acc
                if has_prev:
                    d = prev[i, j] - acc
                    change += d * d
    return xhat_a, xnew_a, (change if has_prev else float("nan"))
