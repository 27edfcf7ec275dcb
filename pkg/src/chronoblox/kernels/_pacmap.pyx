# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pair-based 2D projection optimizer (Adam, three pair classes)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt, pow

cnp.import_array()

DEF BETA1 = 0.9
DEF BETA2 = 0.999
DEF EPS = 1e-7


cdef inline void _accumulate(double[:, ::1] y, int[:, ::1] pairs, double coef_num,
                             double denom_add, bint repulse, double weight,
                             double[:, ::1] grad, double* loss) nogil:
    """One pair class: attractive d/(a+d) terms or the repulsive 1/(1+d) term."""
    cdef long p, i, j
    cdef double dx, dy, d, coef, denom
    for p in range(pairs.shape[0]):
        i = pairs[p, 0]
        j = pairs[p, 1]
        dx = y[i, 0] - y[j, 0]
        dy = y[i, 1] - y[j, 1]
        d = dx * dx + dy * dy + 1.0
        denom = denom_add + d
        if repulse:
            loss[0] += weight * (1.0 / denom)
            coef = -weight * coef_num / (denom * denom)
        else:
            loss[0] += weight * (d / denom)
            coef = weight * coef_num / (denom * denom)
        grad[i, 0] += coef * dx
        grad[i, 1] += coef * dy
        grad[j, 0] -= coef * dx
        grad[j, 1] -= coef * dy


def pacmap_optimize(double[:, ::1] y, int[:, ::1] nn_pairs, int[:, ::1] mn_pairs,
                    int[:, ::1] fp_pairs, int iters, int phase1, int phase2,
                    double lr):
    """Optimize coordinates in place; returns the loss per iteration."""
    cdef long n = y.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] losses = np.empty(iters)
    cdef double[::1] losses_v = losses
    cdef double[:, ::1] grad = np.zeros((n, 2))
    cdef double[:, ::1] m = np.zeros((n, 2))
    cdef double[:, ::1] v = np.zeros((n, 2))

    cdef long itr, i
    cdef double w_nn, w_mn, w_fp, t, loss, lr_t, g

    with nogil:
        for itr in range(iters):
            if itr < phase1:
                t = <double>itr / <double>phase1
                w_nn = 2.0
                w_mn = 1000.0 * (1.0 - t) + 3.0 * t
                w_fp = 1.0
            elif itr < phase2:
                w_nn = 3.0
                w_mn = 3.0
                w_fp = 1.0
            else:
                w_nn = 1.0
                w_mn = 0.0
                w_fp = 1.0

            loss = 0.0
            for i in range(n):
                grad[i, 0] = 0.0
                grad[i, 1] = 0.0
            _accumulate(y, nn_pairs, 20.0, 10.0, False, w_nn, grad, &loss)
            if w_mn != 0.0:
                _accumulate(y, mn_pairs, 20000.0, 10000.0, False, w_mn, grad, &loss)
            _accumulate(y, fp_pairs, 2.0, 1.0, True, w_fp, grad, &loss)
            losses_v[itr] = loss

            lr_t = lr * sqrt(1.0 - pow(BETA2, itr + 1)) / (1.0 - pow(BETA1, itr + 1))
            for i in range(n):
                m[i, 0] += (1.0 - BETA1) * (grad[i, 0] - m[i, 0])
                m[i, 1] += (1.0 - BETA1) * (grad[i, 1] - m[i, 1])
                v[i, 0] += (1.0 - BETA2) * (grad[i, 0] * grad[i, 0] - v[i, 0])
                v[i, 1] += (1.0 - BETA2) * (grad[i, 1] * grad[i, 1] - v[i, 1])
                y[i, 0] -= lr_t * m[i, 0] / (sqrt(v[i, 0]) + EPS)
                y[i, 1] -= lr_t * m[i, 1] / (sqrt(v[i, 1]) + EPS)
    return losses
