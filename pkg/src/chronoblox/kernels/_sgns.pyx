# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled skip-gram negative-sampling trainer.

Pure sequential SGD: every (center, context) pair updates the weights
immediately, with the input-vector gradient accumulated across the
positive and its negatives and applied once per pair. Deterministic for
a fixed seed (internal splitmix64 stream).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log

cnp.import_array()

DEF Z_CLIP = 30.0


cdef inline unsigned long long _mix(unsigned long long* state) nogil:
    cdef unsigned long long z
    state[0] = state[0] + 0x9E3779B97F4A7C15ULL
    z = state[0]
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double _uniform(unsigned long long* state) nogil:
    return <double>(_mix(state) >> 11) * (1.0 / 9007199254740992.0)


cdef inline long _draw_negative(double[::1] cdf, unsigned long long* state) nogil:
    """Inverse-CDF sample: first index with cdf[idx] >= u."""
    cdef double u = _uniform(state)
    cdef long lo = 0, hi = cdf.shape[0] - 1, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if cdf[mid] < u:
            lo = mid + 1
        else:
            hi = mid
    return lo


def sgns_train(double[:, ::1] w_in, double[:, ::1] w_ctx,
               int[::1] tokens, long long[::1] offsets,
               int window, int negatives, int epochs,
               double lr_start, double lr_end,
               double[::1] noise_cdf, unsigned long long seed):
    """Train in place; returns the mean loss per epoch."""
    cdef long n_sent = offsets.shape[0] - 1
    cdef long dim = w_in.shape[1]
    cdef double total = <double>epochs * <double>n_sent
    cdef double processed = 0.0
    cdef cnp.ndarray[cnp.float64_t, ndim=1] losses = np.zeros(epochs)
    cdef double[::1] losses_v = losses
    cdef double[::1] neu1e = np.zeros(dim)
    cdef unsigned long long state = seed if seed != 0 else 0x6A09E667F3BCC908ULL

    cdef long epoch, s, start, end, n, i, j, lo, hi, d, k, terms
    cdef long c, o, t
    cdef double lr, z, sigma, g, loss

    with nogil:
        for epoch in range(epochs):
            loss = 0.0
            terms = 0
            for s in range(n_sent):
                lr = lr_start + (lr_end - lr_start) * (processed / total)
                processed += 1.0
                start = offsets[s]
                end = offsets[s + 1]
                n = end - start
                if n < 2:
                    continue
                for i in range(n):
                    c = tokens[start + i]
                    lo = i - window if i >= window else 0
                    hi = i + window + 1
                    if hi > n:
                        hi = n
                    for j in range(lo, hi):
                        if j == i:
                            continue
                        o = tokens[start + j]
                        for d in range(dim):
                            neu1e[d] = 0.0
                        # positive term
                        z = 0.0
                        for d in range(dim):
                            z += w_in[c, d] * w_ctx[o, d]
                        if z > Z_CLIP:
                            z = Z_CLIP
                        elif z < -Z_CLIP:
                            z = -Z_CLIP
                        sigma = 1.0 / (1.0 + exp(-z))
                        g = (1.0 - sigma) * lr
                        loss -= log(sigma)
                        terms += 1
                        for d in range(dim):
                            neu1e[d] += g * w_ctx[o, d]
                        for d in range(dim):
                            w_ctx[o, d] += g * w_in[c, d]
                        # negative terms; a draw equal to the target is skipped
                        for k in range(negatives):
                            t = _draw_negative(noise_cdf, &state)
                            if t == o:
                                continue
                            z = 0.0
                            for d in range(dim):
                                z += w_in[c, d] * w_ctx[t, d]
                            if z > Z_CLIP:
                                z = Z_CLIP
                            elif z < -Z_CLIP:
                                z = -Z_CLIP
                            sigma = 1.0 / (1.0 + exp(-z))
                            g = -sigma * lr
                            loss -= log(1.0 - sigma)
                            terms += 1
                            for d in range(dim):
                                neu1e[d] += g * w_ctx[t, d]
                            for d in range(dim):
                                w_ctx[t, d] += g * w_in[c, d]
                        for d in range(dim):
                            w_in[c, d] += neu1e[d]
            if terms > 0:
                losses_v[epoch] = loss / terms
    return losses
