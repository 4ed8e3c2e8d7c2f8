# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the routines in ``_pykernels``; identical signatures and results."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


def matmul(const i64[:, :] a, const i64[:, :] b, const i64[:, :] add, const i64[:, :] mul):
    cdef Py_ssize_t n = a.shape[0], inner = a.shape[1], cols = b.shape[1]
    cdef Py_ssize_t i, j, t
    cdef i64 acc, x
    out = np.zeros((n, cols), dtype=np.int64)
    cdef i64[:, :] o = out
    for i in range(n):
        for j in range(cols):
            acc = 0
            for t in range(inner):
                x = a[i, t]
                if x != 0:
                    acc = add[acc, mul[x, b[t, j]]]
            o[i, j] = acc
    return out


cdef int _rref_inplace(i64[:, :] w, const i64[:, :] add, const i64[:, :] mul, const i64[:] neg,
                       const i64[:] inv, Py_ssize_t pivot_cols, i64* pivots) nogil:
    cdef Py_ssize_t rows = w.shape[0], cols = w.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, p
    cdef i64 tmp, s, f
    cdef int count = 0
    for c in range(pivot_cols):
        if r == rows:
            break
        p = -1
        for i in range(r, rows):
            if w[i, c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for j in range(cols):
                tmp = w[r, j]
                w[r, j] = w[p, j]
                w[p, j] = tmp
        s = inv[w[r, c]]
        for j in range(cols):
            w[r, j] = mul[s, w[r, j]]
        for i in range(rows):
            if i == r:
                continue
            f = w[i, c]
            if f == 0:
                continue
            f = neg[f]
            for j in range(cols):
                if w[r, j] != 0:
                    w[i, j] = add[w[i, j], mul[f, w[r, j]]]
        pivots[count] = c
        count += 1
        r += 1
    return count


def rref(m, const i64[:, :] add, const i64[:, :] mul, const i64[:] neg, const i64[:] inv, Py_ssize_t pivot_cols):
    work = np.array(m, dtype=np.int64, copy=True)
    cdef i64[:, :] w = work
    piv = np.zeros(max(pivot_cols, 1), dtype=np.int64)
    cdef i64[:] pv = piv
    cdef int count = _rref_inplace(w, add, mul, neg, inv, pivot_cols, &pv[0])
    return work, [int(c) for c in piv[:count]]


def rank_many(stack, const i64[:, :] add, const i64[:, :] mul, const i64[:] neg, const i64[:] inv):
    work = np.array(stack, dtype=np.int64, copy=True)
    cdef i64[:, :, :] w = work
    cdef Py_ssize_t count = w.shape[0], cols = w.shape[2], idx
    out = np.empty(count, dtype=np.int64)
    cdef i64[:] o = out
    scratch = np.zeros(max(cols, 1), dtype=np.int64)
    cdef i64[:] sc = scratch
    for idx in range(count):
        o[idx] = _rref_inplace(w[idx], add, mul, neg, inv, cols, &sc[0])
    return out
