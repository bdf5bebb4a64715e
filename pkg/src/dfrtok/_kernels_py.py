"""Numpy fallback kernels: segment-cost table and the segmentation DP fill.

Mirrors the compiled extension operation-for-operation so either backend can
serve `dfrtok.kernels`. Cost accumulation is float64 regardless of the input
feature dtype.
"""

from __future__ import annotations

import numpy as np


def cost_table(h: np.ndarray, U: int) -> np.ndarray:
    """Length-normalized intra-segment pairwise-distance table.

    Returns a (T+1, U+1) float64 array whose entry [j, s] is the cohesion
    cost of the segment covering frames j-s+1..j (1-based, end-anchored);
    entries with s > min(U, j) are zero filler. Built incrementally: the
    pair sum for (j, s) extends the pair sum for (j-1, s-1) by the distances
    from frame j to the s-1 preceding frames.
    """
    h = np.ascontiguousarray(h, dtype=np.float64)
    T = h.shape[0]
    L = np.zeros((T + 1, U + 1))
    if T < 2 or U < 2:
        return L
    # news[j, s] = sum_{k=1..s-1} ||h_j - h_{j-k}||, accumulated in ascending k
    news = np.zeros((T + 1, U + 1))
    acc = np.zeros(T + 1)
    for k in range(1, U):
        if k >= T:
            break
        diff = h[k:] - h[:-k]
        dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        acc[k + 1 :] = acc[k + 1 :] + dist
        news[k + 1 :, k + 1] = acc[k + 1 :]
    pair = np.zeros((T + 1, U + 1))
    for s in range(2, U + 1):
        if s > T:
            break
        pair[s:, s] = pair[s - 1 : -1, s - 1] + news[s:, s]
        L[s:, s] = pair[s:, s] / s
    return L


def dp_fill(L: np.ndarray, T: int, Tp: int, U: int, pruned: bool):
    """Fill the segmentation DP tables over a per-segment cost table.

    d[j, i] is the best achievable score (negated accumulated cost) after
    covering the first j frames with i segments; prev[j, i] records the
    segment length chosen at that cell. Ties prefer the smaller length.
    With `pruned`, j is restricted per (i, s) to the reachability interval
    [max(i, s, T-(Tp-i)*U), min(T, (i-1)*U+s, T-(Tp-i))].
    """
    d = np.full((T + 1, Tp + 1), -np.inf)
    prev = np.zeros((T + 1, Tp + 1), dtype=np.int64)
    d[0, 0] = 0.0
    for i in range(1, Tp + 1):
        dprev = d[:, i - 1]
        dcur = d[:, i]
        pcur = prev[:, i]
        for s in range(1, U + 1):
            if pruned:
                lo = max(i, s, T - (Tp - i) * U)
                hi = min(T, (i - 1) * U + s, T - (Tp - i))
            else:
                lo = i + s - 1
                hi = T
            if hi < lo:
                continue
            js = np.arange(lo, hi + 1)
            base = dprev[js - s]
            ok = base > -np.inf
            if not ok.any():
                continue
            js = js[ok]
            cand = base[ok] - L[js, s]
            upd = cand > dcur[js]
            if upd.any():
                tgt = js[upd]
                dcur[tgt] = cand[upd]
                pcur[tgt] = s
    return d, prev
