"""Chunked streaming: fixed-length chunk plans, per-chunk scheduling, stitching.

Chunks overlap by a small fixed amount; overlapped frames belong to the
earlier chunk's schedule so every frame is emitted exactly once. Each chunk
also records a bounded left-context window for encoder-side use; segment
costs only involve emitted frames, so context does not change the schedule.
Decoded sample streams are stitched with a linear crossfade.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .core import FeatureSequence, Scheme, SchedulerParams, ValidationError
from .scheduler import _costs_for, _run_dp, target_length

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Chunk:
    """One chunk in 1-based inclusive frame indices.

    `overlap_frames` counts frames shared with the previous chunk (0 for
    the first); `context_start` extends the input window leftward.
    """

    context_start: int
    chunk_start: int
    chunk_end: int
    overlap_frames: int


@dataclass(frozen=True)
class ChunkPlan:
    chunks: tuple
    chunk_ms: float
    overlap_ms: float
    context_ms: float


def _frames_from_ms(ms: float, rate_hz: float) -> int:
    # floor, with a small guard against binary rounding noise
    return int(ms * rate_hz / 1000.0 + 1e-9)


def chunk_plan(
    T: int,
    base_rate_hz: float,
    chunk_ms: float = 500.0,
    overlap_ms: float = 50.0,
    context_ms: float = 3000.0,
) -> ChunkPlan:
    """Deterministic chunk boundaries tiling frames 1..T.

    Chunk i covers [1 + i*(C-V), min(T, i*(C-V) + C)] where C and V are the
    chunk and overlap sizes in frames (floor of ms * rate / 1000); the last
    chunk may be short.
    """
    if T < 1:
        raise ValidationError(f"T must be >= 1, got {T}")
    if not (chunk_ms > overlap_ms >= 0):
        raise ValidationError(
            f"need chunk_ms > overlap_ms >= 0, got {chunk_ms}/{overlap_ms}"
        )
    C = _frames_from_ms(chunk_ms, base_rate_hz)
    V = _frames_from_ms(overlap_ms, base_rate_hz)
    ctx = _frames_from_ms(context_ms, base_rate_hz)
    if C - V < 1:
        raise ValidationError(
            f"effective stride must be positive: chunk {C} frames, overlap {V} frames"
        )
    stride = C - V
    chunks = []
    i = 0
    prev_end = 0
    while True:
        start = 1 + i * stride
        end = min(T, i * stride + C)
        overlap = max(0, prev_end - start + 1)
        chunks.append(
            Chunk(
                context_start=max(1, start - ctx),
                chunk_start=start,
                chunk_end=end,
                overlap_frames=overlap,
            )
        )
        prev_end = end
        if end >= T:
            break
        i += 1
    return ChunkPlan(
        chunks=tuple(chunks), chunk_ms=chunk_ms, overlap_ms=overlap_ms, context_ms=context_ms
    )


def stream_schedule(h: FeatureSequence, params: SchedulerParams, plan: ChunkPlan) -> Scheme:
    """Schedule each chunk's emission region independently and concatenate.

    A chunk emits the frames past its overlap with the previous chunk; its
    target length is ceil(emitted / ratio). Chunks too short to satisfy the
    segment cap fall back to all-ones segments (logged).
    """
    if plan.chunks[-1].chunk_end != h.T:
        raise ValidationError(
            f"plan covers {plan.chunks[-1].chunk_end} frames, features have {h.T}"
        )
    pieces = []
    prev_end = 0
    for ch in plan.chunks:
        emit_start = prev_end + 1
        emit_end = ch.chunk_end
        prev_end = emit_end
        Tc = emit_end - emit_start + 1
        piece = FeatureSequence(
            frames=h.frames[emit_start - 1 : emit_end], base_rate_hz=h.base_rate_hz
        )
        Tpc = target_length(Tc, params.ratio)
        if Tc > Tpc * params.U:
            log.warning(
                "chunk [%d, %d] infeasible for T'=%d, U=%d; using all-ones segments",
                emit_start, emit_end, Tpc, params.U,
            )
            pieces.append(np.ones(Tc, dtype=np.int64))
            continue
        costs = _costs_for(piece, params.U, params.objective)
        segs, _, _ = _run_dp(costs, Tc, Tpc, params.U, pruned=True)
        pieces.append(segs)
    return Scheme(segments=np.concatenate(pieces), U=params.U, T=h.T)


def crossfade(a, b, overlap_samples: int) -> np.ndarray:
    """Concatenate two sample vectors, linearly blending the overlap.

    Weights run from 0 to 1 inclusive across the overlap, so the first
    blended sample is pure `a` and the last is pure `b`. With overlap 0
    this is plain concatenation.
    """
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    n = int(overlap_samples)
    if n < 0 or n > a.size or n > b.size:
        raise ValidationError(
            f"overlap {n} exceeds an input (lengths {a.size}, {b.size})"
        )
    if n == 0:
        return np.concatenate([a, b])
    w = np.linspace(0.0, 1.0, n)
    blended = (1.0 - w) * a[a.size - n :] + w * b[:n]
    return np.concatenate([a[: a.size - n], blended, b[n:]])
