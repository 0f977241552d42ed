"""Numpy fallback for the compiled kernels.

Arithmetic is ordered exactly like ``_kernels.pyx`` (sequential sums via
``cumsum``, no fused multiply-add) so both backends give bit-identical runs.
"""
import numpy as np


def clause_densities(n, vars, neg):
    k = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    vars = np.asarray(vars, dtype=np.int64)
    neg = np.asarray(neg, dtype=np.int64)
    for j in range(vars.shape[0]):
        sat = np.zeros(k.shape, dtype=bool)
        for a in range(3):
            sat |= (((k >> vars[j, a]) & 1) ^ neg[j, a]).astype(bool)
        out += sat
    return out


def amplify_attempt(ar, ai, c1r, c1i, uniforms, max_mask, eps):
    track = eps >= 0.0
    mask = np.asarray(max_mask, dtype=bool)
    successes = 0
    failed = False
    p1 = 0.0
    for u in uniforms:
        br = c1r * ar - c1i * ai
        bi = c1r * ai + c1i * ar
        w = br * br + bi * bi
        p1 = float(np.cumsum(w)[-1])
        pmax = float(np.cumsum(w[mask])[-1]) if track and mask.any() else 0.0
        if p1 > 1.0:
            p1 = 1.0
        if not (u < p1):
            failed = True
            break
        s = np.sqrt(p1)
        ar[:] = br / s
        ai[:] = bi / s
        successes += 1
        if track and abs(p1 - pmax) <= eps:
            break
    return successes, failed, p1
