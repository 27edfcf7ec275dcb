"""Numpy fallback for the skip-gram negative-sampling trainer.

Applies updates per sentence batch (gradients are computed against the
start-of-sentence weights), which is numerically different from, but
behaviorally equivalent to, the sequential compiled kernel. Deterministic
for a fixed seed.
"""

from __future__ import annotations

import numpy as np

_Z_CLIP = 30.0


def _pair_positions(n: int, window: int) -> tuple[np.ndarray, np.ndarray]:
    idx = np.arange(n)
    ii, jj = np.meshgrid(idx, idx, indexing="ij")
    keep = (ii != jj) & (np.abs(ii - jj) <= window)
    return ii[keep], jj[keep]


def sgns_train(w_in: np.ndarray, w_ctx: np.ndarray,
               tokens: np.ndarray, offsets: np.ndarray,
               window: int, negatives: int, epochs: int,
               lr_start: float, lr_end: float,
               noise_cdf: np.ndarray, seed: int) -> np.ndarray:
    """Train in place; returns the mean loss per epoch."""
    rng = np.random.default_rng(seed)
    n_sent = len(offsets) - 1
    total = epochs * n_sent

    pairs: list[tuple[np.ndarray, np.ndarray] | None] = []
    for s in range(n_sent):
        toks = tokens[offsets[s]:offsets[s + 1]]
        if len(toks) < 2:
            pairs.append(None)
            continue
        ci, oj = _pair_positions(len(toks), window)
        pairs.append((toks[ci], toks[oj]))

    losses = np.zeros(epochs)
    processed = 0
    for epoch in range(epochs):
        loss_sum = 0.0
        terms = 0
        for s in range(n_sent):
            lr = lr_start + (lr_end - lr_start) * (processed / total)
            processed += 1
            if pairs[s] is None:
                continue
            c_tok, o_tok = pairs[s]
            p = len(c_tok)
            neg = np.searchsorted(noise_cdf, rng.random((p, negatives))).astype(np.int64)
            valid = neg != o_tok[:, None]  # drawn negative equal to the target is skipped

            w_c = w_in[c_tok]  # (p, d) snapshot
            z_pos = np.clip(np.einsum("pd,pd->p", w_c, w_ctx[o_tok]), -_Z_CLIP, _Z_CLIP)
            z_neg = np.clip(np.einsum("pd,pkd->pk", w_c, w_ctx[neg]), -_Z_CLIP, _Z_CLIP)
            sig_pos = 1.0 / (1.0 + np.exp(-z_pos))
            sig_neg = 1.0 / (1.0 + np.exp(-z_neg))

            g_pos = (1.0 - sig_pos) * lr                      # (p,)
            g_neg = np.where(valid, -sig_neg, 0.0) * lr       # (p, k)

            d_in = g_pos[:, None] * w_ctx[o_tok] + np.einsum("pk,pkd->pd", g_neg, w_ctx[neg])
            np.add.at(w_ctx, o_tok, g_pos[:, None] * w_c)
            np.add.at(w_ctx, neg.reshape(-1),
                      (g_neg[:, :, None] * w_c[:, None, :]).reshape(-1, w_c.shape[1]))
            np.add.at(w_in, c_tok, d_in)

            loss_sum += -np.log(sig_pos).sum() - np.log(1.0 - sig_neg[valid]).sum()
            terms += p + int(valid.sum())
        losses[epoch] = loss_sum / max(terms, 1)
    return losses
