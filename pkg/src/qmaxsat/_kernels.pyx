# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Must stay operation-for-operation identical to _kernels_py."""
import numpy as np

from libc.math cimport sqrt, fabs


def clause_densities(int n, const long long[:, ::1] vars, const unsigned char[:, ::1] neg):
    cdef Py_ssize_t N = (<Py_ssize_t>1) << n
    cdef Py_ssize_t m = vars.shape[0]
    out = np.zeros(N, dtype=np.int64)
    cdef long long[::1] d = out
    # clause j is false exactly when (k & mask[j]) == bad[j]
    masks = np.zeros(m, dtype=np.int64)
    bads = np.zeros(m, dtype=np.int64)
    cdef long long[::1] mask = masks
    cdef long long[::1] bad = bads
    cdef Py_ssize_t k, j, a
    cdef long long cnt, bit
    for j in range(m):
        for a in range(3):
            bit = (<long long>1) << vars[j, a]
            mask[j] |= bit
            if neg[j, a]:
                bad[j] |= bit
    with nogil:
        for k in range(N):
            cnt = m
            for j in range(m):
                cnt -= (k & mask[j]) == bad[j]
            d[k] = cnt
    return out


def amplify_attempt(double[::1] ar, double[::1] ai,
                    const double[::1] c1r, const double[::1] c1i,
                    const double[::1] uniforms,
                    const unsigned char[::1] max_mask, double eps):
    """Run post-selected iterations until the first aux=0 outcome.

    ``ar``/``ai`` hold the aux=0 amplitudes (aux=1 is zero on entry) and are
    overwritten with the post-selected, reset state after each success.
    Returns ``(successes, failed, last_p_one)``.
    """
    cdef Py_ssize_t N = ar.shape[0]
    cdef Py_ssize_t r = uniforms.shape[0]
    cdef Py_ssize_t i, k
    cdef double br, bi, p1, pmax, s, w
    cdef Py_ssize_t successes = 0
    cdef bint failed = False
    cdef bint track = eps >= 0.0
    p1 = 0.0
    with nogil:
        for i in range(r):
            p1 = 0.0
            pmax = 0.0
            for k in range(N):
                br = c1r[k] * ar[k] - c1i[k] * ai[k]
                bi = c1r[k] * ai[k] + c1i[k] * ar[k]
                w = br * br + bi * bi
                p1 = p1 + w
                if track and max_mask[k]:
                    pmax = pmax + w
            if p1 > 1.0:
                p1 = 1.0
            if not (uniforms[i] < p1):
                failed = True
                break
            s = sqrt(p1)
            for k in range(N):
                br = c1r[k] * ar[k] - c1i[k] * ai[k]
                bi = c1r[k] * ai[k] + c1i[k] * ar[k]
                ar[k] = br / s
                ai[k] = bi / s
            successes += 1
            if track and fabs(p1 - pmax) <= eps:
                break
    return successes, bool(failed), p1
