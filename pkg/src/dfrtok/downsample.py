"""Frame-averaged downsampling and scheme construction from length mixes.

`downsample_compact`/`downsample_expanded` are the plain per-segment loops;
`downsample_fast` is the vectorized index-aggregation path (repeat segment
ids, scatter-add rows, divide by lengths, gather back). The two agree within
1e-6 relative; accumulation order differs so bit-equality is not promised.
"""

from __future__ import annotations

import warnings

import numpy as np

from .core import FeatureSequence, Scheme, ValidationError


def _check(h: FeatureSequence, s: Scheme) -> None:
    if s.T != h.T:
        raise ValidationError(f"scheme covers T={s.T} frames, features have T={h.T}")


def downsample_compact(h: FeatureSequence, s: Scheme) -> np.ndarray:
    """T' x d matrix of per-segment means, one row per segment."""
    _check(h, s)
    out = np.empty((len(s), h.d), dtype=h.frames.dtype)
    pos = 0
    for i, length in enumerate(s.segments):
        out[i] = h.frames[pos : pos + length].mean(axis=0)
        pos += length
    return out


def downsample_expanded(h: FeatureSequence, s: Scheme) -> np.ndarray:
    """T x d matrix where every frame is replaced by its segment mean."""
    return np.repeat(downsample_compact(h, s), s.segments, axis=0)


def downsample_fast(h: FeatureSequence, s: Scheme, mode: str = "expanded") -> np.ndarray:
    """Vectorized segment averaging; `mode` selects compact or expanded output."""
    _check(h, s)
    if mode not in ("compact", "expanded"):
        raise ValidationError(f"mode must be 'compact' or 'expanded', got {mode!r}")
    seg_idx = np.repeat(np.arange(len(s)), s.segments)
    sums = np.zeros((len(s), h.d), dtype=h.frames.dtype)
    np.add.at(sums, seg_idx, h.frames)
    avg = sums / np.asarray(s.segments, dtype=h.frames.dtype)[:, None]
    if mode == "compact":
        return avg
    return avg[seg_idx]


def scheme_from_proportions(p, T: int, U: int, seed=0) -> Scheme:
    """Build a shuffled Scheme whose length histogram follows proportions p.

    p gives the share of segments having each length 1..U. Segment counts
    come from largest-remainder rounding of a budget of about T / mean-length
    segments; any leftover frames are absorbed by adding, removing, or
    resizing length-1 segments so the lengths sum to exactly T. Ordering is
    shuffled with the seeded generator (an int seed or a numpy Generator).
    """
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    if p.size != U:
        raise ValidationError(f"p must have exactly U={U} entries, got {p.size}")
    if (p < 0).any():
        raise ValidationError("proportions must be nonnegative")
    if abs(p.sum() - 1.0) > 1e-6:
        raise ValidationError(f"proportions must sum to 1, got {p.sum()!r}")
    if T < 1:
        raise ValidationError(f"T must be >= 1, got {T}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    lengths = np.arange(1, U + 1)
    if p[lengths <= T].sum() < 1e-9 and T < U:
        warnings.warn(
            f"all proportion mass sits on lengths > T={T}; "
            "falling back to a single clipped segment"
        )
        return Scheme(segments=np.array([T], dtype=np.int64), U=U, T=T)

    mean_len = float((lengths * p).sum())
    budget = max(1, round(T / mean_len))
    quota = p * budget
    n = np.floor(quota).astype(np.int64)
    # largest remainder: hand out the missing segment count, ties to shorter
    missing = budget - int(n.sum())
    order = np.argsort(-(quota - n), kind="stable")
    for idx in order[:missing]:
        n[idx] += 1

    delta = T - int((lengths * n).sum())
    while delta > 0:
        if n[0] > 0 and delta <= U - 1:
            n[0] -= 1
            n[delta] += 1  # one length-1 segment becomes length 1+delta
            delta = 0
        else:
            n[0] += 1
            delta -= 1
    while delta < 0:
        if n[0] > 0:
            n[0] -= 1
            delta += 1
        else:
            k = int(np.max(np.nonzero(n)[0]))  # longest available, 0-based
            shrink = min(k, -delta)
            n[k] -= 1
            n[k - shrink] += 1
            delta += shrink

    segs = np.repeat(lengths, n)
    rng.shuffle(segs)
    return Scheme(segments=segs, U=U, T=T)
