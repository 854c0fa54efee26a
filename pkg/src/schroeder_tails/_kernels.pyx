# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_fallback``."""
import numpy as np


def schroeder_sweep(probs, Py_ssize_t order, double tiny=1e-280):
    cdef const double[::1] p = np.ascontiguousarray(probs, dtype=np.float64)
    cdef Py_ssize_t deg = p.shape[0] - 1
    cdef double p1 = p[1]
    phi_arr = np.zeros(order + 1)
    acc_arr = np.zeros(order + 1)
    row_arr = np.zeros(order + 1)
    cdef double[::1] phi = phi_arr
    cdef double[::1] acc = acc_arr
    cdef double[::1] row = row_arr
    cdef Py_ssize_t lo = 1, hi = min(deg, order), new_hi, i, j, k, start
    cdef double s, p1k = p1, f
    phi[1] = 1.0
    for i in range(1, hi + 1):
        row[i] = p[i]
        acc[i] += row[i]
    for k in range(2, order + 1):
        p1k *= p1
        phi[k] = acc[k] / (p1 - p1k)
        if lo > hi:
            continue
        new_hi = min(hi + deg, order)
        # in-place row *= P, descending so lower entries are still old
        for i in range(new_hi, lo, -1):
            s = 0.0
            for j in range(max(1, i - hi), min(deg, i - lo) + 1):
                s += p[j] * row[i - j]
            row[i] = s
        row[lo] = 0.0
        lo += 1
        hi = new_hi
        while lo <= hi and row[lo] < tiny:
            row[lo] = 0.0
            lo += 1
        while hi >= lo and row[hi] < tiny:
            row[hi] = 0.0
            hi -= 1
        start = lo if lo > k + 1 else k + 1
        f = phi[k]
        for i in range(start, hi + 1):
            acc[i] += f * row[i]
    return phi_arr


def poincare_recursion(shifted, double mean, Py_ssize_t order):
    cdef const double[::1] c = np.ascontiguousarray(shifted, dtype=np.float64)
    cdef Py_ssize_t deg = c.shape[0] - 1
    pw_arr = np.zeros((deg + 1, order + 1))
    cdef double[:, ::1] pw = pw_arr
    cdef Py_ssize_t n, k, j
    cdef double s, t, scale = mean
    pw[1, 1] = -1.0
    for n in range(2, order + 1):
        scale *= mean
        s = 0.0
        for k in range(2, deg + 1):
            if n < k:
                break
            t = 0.0
            for j in range(1, n - k + 2):
                t += pw[1, j] * pw[k - 1, n - j]
            pw[k, n] = t
            s += c[k] * t
        pw[1, n] = s / (scale - mean)
    return pw_arr[1].copy()


def reduce_iterate(probs, shifted, u, steps):
    cdef const double[::1] p = np.ascontiguousarray(probs, dtype=np.float64)
    cdef const double[::1] c = np.ascontiguousarray(shifted, dtype=np.float64)
    u_arr = np.ascontiguousarray(u, dtype=np.complex128).ravel()
    steps_arr = np.ascontiguousarray(np.broadcast_to(steps, np.shape(u)), dtype=np.int64).ravel()
    out_arr = np.empty_like(u_arr)
    cdef double complex[::1] uv = u_arr
    cdef const long long[::1] st = steps_arr
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t deg = p.shape[0] - 1
    cdef Py_ssize_t i, it, j
    cdef double complex x, acc
    cdef bint far
    for i in range(uv.shape[0]):
        x = uv[i]
        far = False
        for it in range(st[i]):
            if not far and (x.real * x.real + x.imag * x.imag) >= 0.25:
                x = 1.0 + x
                far = True
            if far:
                acc = p[deg]
                for j in range(deg - 1, 0, -1):
                    acc = acc * x + p[j]
            else:
                acc = c[deg]
                for j in range(deg - 1, 0, -1):
                    acc = acc * x + c[j]
            x = acc * x
        out[i] = x if far else 1.0 + x
    return out_arr.reshape(np.shape(u))
