"""Numpy fallback for the pair-based 2D projection optimizer.

Same objective, schedule and Adam update as the compiled kernel; gradient
scatter uses ordered in-place accumulation, so results are deterministic.
"""

from __future__ import annotations

import numpy as np

_BETA1 = 0.9
_BETA2 = 0.999
_EPS = 1e-7


def _weights(itr: int, phase1: int, phase2: int) -> tuple[float, float, float]:
    if itr < phase1:
        t = itr / phase1
        return 2.0, 1000.0 * (1.0 - t) + 3.0 * t, 1.0
    if itr < phase2:
        return 3.0, 3.0, 1.0
    return 1.0, 0.0, 1.0


def pacmap_optimize(y: np.ndarray, nn_pairs: np.ndarray, mn_pairs: np.ndarray,
                    fp_pairs: np.ndarray, iters: int, phase1: int, phase2: int,
                    lr: float) -> np.ndarray:
    """Optimize coordinates in place; returns the loss per iteration."""
    m = np.zeros_like(y)
    v = np.zeros_like(y)
    losses = np.empty(iters)

    for itr in range(iters):
        w_nn, w_mn, w_fp = _weights(itr, phase1, phase2)
        grad = np.zeros_like(y)
        loss = 0.0
        for pairs, kind, w in ((nn_pairs, "nn", w_nn),
                               (mn_pairs, "mn", w_mn),
                               (fp_pairs, "fp", w_fp)):
            if len(pairs) == 0 or w == 0.0:
                continue
            i, j = pairs[:, 0], pairs[:, 1]
            diff = y[i] - y[j]
            d = diff[:, 0] ** 2 + diff[:, 1] ** 2 + 1.0
            if kind == "nn":
                loss += w * (d / (10.0 + d)).sum()
                coef = w * 20.0 / (10.0 + d) ** 2
            elif kind == "mn":
                loss += w * (d / (10000.0 + d)).sum()
                coef = w * 20000.0 / (10000.0 + d) ** 2
            else:
                loss += w * (1.0 / (1.0 + d)).sum()
                coef = -w * 2.0 / (1.0 + d) ** 2
            contrib = coef[:, None] * diff
            np.add.at(grad, i, contrib)
            np.add.at(grad, j, -contrib)
        losses[itr] = loss

        lr_t = lr * np.sqrt(1.0 - _BETA2 ** (itr + 1)) / (1.0 - _BETA1 ** (itr + 1))
        m += (1.0 - _BETA1) * (grad - m)
        v += (1.0 - _BETA2) * (grad * grad - v)
        y -= lr_t * m / (np.sqrt(v) + _EPS)
    return losses
