# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

NAME = "cython"

ctypedef long long i64
ctypedef unsigned long long u64


def gf2_power_table(u64 p, u64 g, int m):
    if m < 1 or m > 30:
        raise ValueError("gf2_power_table supports 1 <= m <= 30")
    cdef i64 L = (1 << m) - 1
    cdef u64 top = (<u64>1) << m
    cdef cnp.ndarray[i64, ndim=1] pw = np.empty(L, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] vals = np.empty(L, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] logt = np.full(1 << m, -1, dtype=np.int64)
    cdef u64 a = 1, u, q, r, x, gg
    cdef i64 e
    cdef int i
    for e in range(L):
        pw[e] = <i64>a
        logt[a] = e
        u = a << m
        q = 0
        for i in range(2 * m - 1, m - 1, -1):
            if (u >> i) & 1:
                q |= (<u64>1) << (i - m)
                u ^= p << (i - m)
        vals[e] = <i64>q
        r = 0
        x = a
        gg = g
        while gg:
            if gg & 1:
                r ^= x
            gg >>= 1
            x <<= 1
            if x & top:
                x ^= p
        a = r
    return pw, logt, vals


def gf2_span(cols_in):
    cdef cnp.ndarray[i64, ndim=2] cols = np.ascontiguousarray(cols_in, dtype=np.int64)
    cdef Py_ssize_t C = cols.shape[0]
    cdef int m = cols.shape[1]
    cdef Py_ssize_t N = (<Py_ssize_t>1) << m
    cdef cnp.ndarray[i64, ndim=2] out = np.zeros((C, N), dtype=np.int64)
    cdef Py_ssize_t c, n, gray_prev, gray
    cdef int k
    cdef i64 acc
    for c in range(C):
        # Gray-code walk: consecutive codes differ in one column
        acc = 0
        out[c, 0] = 0
        for n in range(1, N):
            k = 0
            while not ((n >> k) & 1):
                k += 1
            acc ^= cols[c, k]
            gray = n ^ (n >> 1)
            out[c, gray] = acc
    return out


def circulant_direct(w_in, x_in):
    cdef cnp.ndarray[double, ndim=1] w = np.ascontiguousarray(w_in, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] x = np.ascontiguousarray(x_in, dtype=np.float64)
    cdef Py_ssize_t L = w.shape[0]
    if x.shape[0] != L:
        raise ValueError("length mismatch")
    cdef cnp.ndarray[double, ndim=1] out = np.empty(L, dtype=np.float64)
    cdef Py_ssize_t i, n, k
    cdef double acc
    for i in range(L):
        acc = 0.0
        for n in range(L):
            k = i - n
            if k < 0:
                k += L
            acc += w[k] * x[n]
        out[i] = acc
    return out


def kernel_pair_sum(x_in, gamma_in, feat_in, tail_in):
    cdef cnp.ndarray[double, ndim=2] x = np.ascontiguousarray(x_in, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] gamma = np.ascontiguousarray(gamma_in, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=3] feat = np.ascontiguousarray(feat_in, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] tail = np.ascontiguousarray(tail_in, dtype=np.float64)
    cdef Py_ssize_t N = x.shape[0], s = x.shape[1], R = feat.shape[2], T = tail.shape[0]
    cdef Py_ssize_t n, n2, j, r, t
    cdef double E, K, F, d, pw, total = 0.0, comp = 0.0, y, tmp, rowsum
    for n in range(N):
        rowsum = 0.0
        for n2 in range(N):
            E = 0.0
            for j in range(s):
                d = fabs(x[n, j] - x[n2, j])
                # Horner on the tail polynomial
                K = tail[T - 1]
                for t in range(T - 2, -1, -1):
                    K = K * d + tail[t]
                for r in range(R):
                    K += feat[n, j, r] * feat[n2, j, r]
                F = gamma[j] * K
                E += F * (1.0 + E)
            rowsum += E
        y = rowsum - comp
        tmp = total + y
        comp = (tmp - total) - y
        total = tmp
    return total
