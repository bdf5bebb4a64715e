"""Segment cohesion costs and the objectives used to score segmentations.

The primary objective is the negated sum of length-normalized intra-segment
pairwise Euclidean distances; alternatives (reconstruction L2, per-frame
cosine, phone-boundary alignment) are provided for comparison runs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import FeatureSequence, Scheme, ValidationError, _freeze


@dataclass(frozen=True)
class CostTable:
    """Precomputed per-segment cohesion costs, end-anchored.

    values[j, s] is the cost of the segment covering frames j-s+1..j
    (1-based) for 1 <= s <= min(U, j); cost is zero for single frames.
    """

    values: np.ndarray
    U: int
    T: int

    def __post_init__(self):
        object.__setattr__(
            self, "values", _freeze(np.ascontiguousarray(self.values, dtype=np.float64))
        )

    def cost(self, end: int, s: int) -> float:
        if not (1 <= s <= min(self.U, end)) or end > self.T:
            raise ValidationError(
                f"cost index out of range: end={end}, s={s} for T={self.T}, U={self.U}"
            )
        return float(self.values[end, s])


@dataclass(frozen=True)
class PhoneBoundaries:
    """Frame indices in [1, T-1] where a phone transition occurs."""

    boundary_frames: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.boundary_frames, dtype=np.int64).reshape(-1)
        if b.size and (np.diff(b) <= 0).any():
            raise ValidationError("boundary frames must be strictly increasing")
        if b.size and b[0] < 1:
            raise ValidationError("boundary frames must be >= 1")
        object.__setattr__(self, "boundary_frames", _freeze(b))

    @classmethod
    def from_json(cls, text: str) -> "PhoneBoundaries":
        import json

        return cls(np.asarray(json.loads(text), dtype=np.int64))


def segment_cost(h: FeatureSequence, end: int, s: int) -> float:
    """Cohesion cost of the segment of length s ending at frame `end`.

    Sums the Euclidean distance over every unordered frame pair inside the
    segment and divides by s. Deliberately naive; serves as the reference
    for the incremental table builder.
    """
    if not (1 <= s <= end <= h.T):
        raise ValidationError(f"need 1 <= s <= end <= T, got s={s}, end={end}, T={h.T}")
    block = h.frames[end - s : end].astype(np.float64)
    total = 0.0
    for a in range(s):
        for b in range(a + 1, s):
            diff = block[a] - block[b]
            total += float(np.sqrt(np.dot(diff, diff)))
    return total / s


def precompute_costs(h: FeatureSequence, U: int) -> CostTable:
    """Cohesion costs for every (end, length<=U) pair, in O(T*U) pair work."""
    if U < 1:
        raise ValidationError(f"U must be >= 1, got {U}")
    values = kernels.cost_table(
        np.ascontiguousarray(h.frames, dtype=np.float64), int(U)
    )
    return CostTable(values=values, U=int(U), T=h.T)


def _check_scheme(h: FeatureSequence, s: Scheme) -> None:
    if s.T != h.T:
        raise ValidationError(f"scheme covers T={s.T} frames, features have T={h.T}")


def objective_jh(h: FeatureSequence, s: Scheme) -> float:
    """Negated sum of segment cohesion costs; 0 is the best possible value.

    Uses the same cost table the schedulers consume, so a scheduler's
    reported score reproduces this value exactly on its own output.
    """
    _check_scheme(h, s)
    table = kernels.cost_table(
        np.ascontiguousarray(h.frames, dtype=np.float64), int(s.segments.max())
    )
    total = 0.0
    for end, length in zip(s.ends(), s.segments):
        total = total - table[end, length]
    return total


def expand_means(h: FeatureSequence, s: Scheme) -> np.ndarray:
    """Segment-mean reconstruction at full length T, in float64."""
    _check_scheme(h, s)
    f = h.frames.astype(np.float64)
    seg_idx = np.repeat(np.arange(len(s)), s.segments)
    sums = np.zeros((len(s), h.d))
    np.add.at(sums, seg_idx, f)
    means = sums / np.asarray(s.segments, dtype=np.float64)[:, None]
    return means[seg_idx]


def objective_l2(h: FeatureSequence, s: Scheme) -> float:
    """Negated total frame-wise Euclidean error of the mean reconstruction."""
    recon = expand_means(h, s)
    diff = h.frames.astype(np.float64) - recon
    return -float(np.sqrt(np.einsum("ij,ij->i", diff, diff)).sum())


def objective_cosine(h: FeatureSequence, s: Scheme) -> float:
    """Sum over frames of cos(h_t, reconstruction_t); higher is better.

    Zero-norm frames (or zero-norm segment means) contribute 0 and raise a
    single warning carrying the affected-term count.
    """
    recon = expand_means(h, s)
    f = h.frames.astype(np.float64)
    nf = np.sqrt(np.einsum("ij,ij->i", f, f))
    nr = np.sqrt(np.einsum("ij,ij->i", recon, recon))
    dot = np.einsum("ij,ij->i", f, recon)
    bad = (nf == 0.0) | (nr == 0.0)
    nbad = int(bad.sum())
    if nbad:
        warnings.warn(f"{nbad} zero-norm frame(s) contribute 0 to the cosine objective")
    denom = np.where(bad, 1.0, nf * nr)
    terms = np.where(bad, 0.0, dot / denom)
    return float(terms.sum())


def alignment_cost(s: Scheme, b: PhoneBoundaries) -> int:
    """Number of phone boundaries that fall strictly inside a segment.

    A boundary at frame t separates frames t and t+1; it is split when both
    frames land in the same segment, i.e. t is not a segment end.
    """
    frames = b.boundary_frames
    if frames.size and frames[-1] > s.T - 1:
        raise ValidationError(
            f"boundary frame {int(frames[-1])} out of range [1, {s.T - 1}]"
        )
    ends = set(int(e) for e in s.ends())
    return int(sum(1 for t in frames.tolist() if t not in ends))


def l2_cost_table(h: FeatureSequence, U: int) -> np.ndarray:
    """Per-segment reconstruction-L2 costs, same layout as the cohesion table."""
    f = h.frames.astype(np.float64)
    T, d = f.shape
    out = np.zeros((T + 1, U + 1))
    csum = np.vstack([np.zeros((1, d)), np.cumsum(f, axis=0)])
    for s in range(1, U + 1):
        if s > T:
            break
        means = (csum[s:] - csum[:-s]) / s  # window ending at j = s..T
        cost = np.zeros(T - s + 1)
        for k in range(s):
            diff = f[k : k + T - s + 1] - means
            cost += np.sqrt(np.einsum("ij,ij->i", diff, diff))
        out[s:, s] = cost
    return out


def cosine_cost_table(h: FeatureSequence, U: int) -> np.ndarray:
    """Per-segment negated cosine sums, same layout as the cohesion table."""
    f = h.frames.astype(np.float64)
    T, d = f.shape
    out = np.zeros((T + 1, U + 1))
    csum = np.vstack([np.zeros((1, d)), np.cumsum(f, axis=0)])
    nf = np.sqrt(np.einsum("ij,ij->i", f, f))
    nbad = 0
    for s in range(1, U + 1):
        if s > T:
            break
        means = (csum[s:] - csum[:-s]) / s
        nm = np.sqrt(np.einsum("ij,ij->i", means, means))
        gain = np.zeros(T - s + 1)
        for k in range(s):
            nk = nf[k : k + T - s + 1]
            dot = np.einsum("ij,ij->i", f[k : k + T - s + 1], means)
            bad = (nk == 0.0) | (nm == 0.0)
            nbad += int(bad.sum())
            gain += np.where(bad, 0.0, dot / np.where(bad, 1.0, nk * nm))
        out[s:, s] = -gain
    if nbad:
        warnings.warn(f"{nbad} zero-norm term(s) contribute 0 to the cosine objective")
    return out
