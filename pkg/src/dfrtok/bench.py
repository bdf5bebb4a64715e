"""Benchmark harness: DP variants, downsampling paths, kernel backends.

Wall-clock numbers are reported, never asserted; correctness checks (equal
scores, bounded relative error) are hard failures. State-count ratios are
pure functions of (T, T', U) and reproduce across machines.
"""

from __future__ import annotations

import time

import numpy as np

from . import kernels
from .core import FeatureSequence, Scheme, ValidationError
from .downsample import downsample_expanded, downsample_fast
from .scheduler import check_feasible, count_states, schedule_pruned, schedule_vanilla


def _random_features(T: int, d: int, rng: np.random.Generator) -> FeatureSequence:
    return FeatureSequence(frames=rng.standard_normal((T, d)).astype(np.float32))


def _random_scheme(T: int, U: int, rng: np.random.Generator) -> Scheme:
    lengths = []
    left = T
    while left > 0:
        s = int(rng.integers(1, min(U, left) + 1))
        lengths.append(s)
        left -= s
    return Scheme(segments=np.asarray(lengths, dtype=np.int64), U=U, T=T)


def bench_dp(T: int, Tp: int, U: int, d: int = 64, trials: int = 5, seed: int = 0) -> dict:
    """Time vanilla vs pruned scheduling on identical random features."""
    check_feasible(T, Tp, U)
    rng = np.random.default_rng(seed)
    vanilla_ms = []
    pruned_ms = []
    for _ in range(trials):
        h = _random_features(T, d, rng)
        t0 = time.perf_counter()
        sv, score_v = schedule_vanilla(h, Tp, U)
        t1 = time.perf_counter()
        sp, score_p = schedule_pruned(h, Tp, U)
        t2 = time.perf_counter()
        if score_v != score_p or not np.array_equal(sv.segments, sp.segments):
            raise ValidationError(
                f"pruned/vanilla disagree: scores {score_v!r} vs {score_p!r}"
            )
        vanilla_ms.append((t1 - t0) * 1e3)
        pruned_ms.append((t2 - t1) * 1e3)
    vanilla_states, pruned_states = count_states(T, Tp, U)
    return {
        "T": T, "Tprime": Tp, "U": U, "d": d, "trials": trials,
        "vanilla_ms": min(vanilla_ms),
        "pruned_ms": min(pruned_ms),
        "vanilla_states": vanilla_states,
        "pruned_states": pruned_states,
        "state_reduction_pct": 100.0 * (1.0 - pruned_states / vanilla_states),
        "backend": kernels.BACKEND,
    }


def bench_downsample(T: int, d: int, U: int = 4, trials: int = 10, seed: int = 0) -> dict:
    """Time the vectorized vs per-segment averaging paths; check agreement."""
    if T < 1 or d < 1:
        raise ValidationError(f"need T, d >= 1, got {T}, {d}")
    rng = np.random.default_rng(seed)
    fast_ms, naive_ms, max_rel = [], [], 0.0
    for _ in range(trials):
        h = _random_features(T, d, rng)
        s = _random_scheme(T, U, rng)
        t0 = time.perf_counter()
        fast = downsample_fast(h, s, mode="expanded")
        t1 = time.perf_counter()
        naive = downsample_expanded(h, s)
        t2 = time.perf_counter()
        fast_ms.append((t1 - t0) * 1e3)
        naive_ms.append((t2 - t1) * 1e3)
        denom = np.maximum(np.abs(naive), 1e-12)
        max_rel = max(max_rel, float(np.max(np.abs(fast - naive) / denom)))
    if max_rel > 1e-6:
        raise ValidationError(f"fast/naive relative error {max_rel:.3e} exceeds 1e-6")
    return {
        "T": T, "d": d, "U": U, "trials": trials,
        "fast_ms": min(fast_ms),
        "naive_ms": min(naive_ms),
        "speedup": min(naive_ms) / max(min(fast_ms), 1e-9),
        "max_rel_err": max_rel,
    }


def bench_backends(T: int, Tp: int, U: int, d: int = 64, trials: int = 3, seed: int = 0) -> dict:
    """Compare the compiled and pure kernel backends on one DP instance."""
    check_feasible(T, Tp, U)
    rng = np.random.default_rng(seed)
    h = np.ascontiguousarray(rng.standard_normal((T, d)))
    out = {"T": T, "Tprime": Tp, "U": U, "d": d, "backends": {}}
    results = {}
    for name, impl in kernels.backends().items():
        cost_ms, dp_ms = [], []
        for _ in range(trials):
            t0 = time.perf_counter()
            L = impl.cost_table(h, U)
            t1 = time.perf_counter()
            dtab, _ = impl.dp_fill(L, T, Tp, U, True)
            t2 = time.perf_counter()
            cost_ms.append((t1 - t0) * 1e3)
            dp_ms.append((t2 - t1) * 1e3)
        results[name] = float(dtab[T, Tp])
        out["backends"][name] = {
            "cost_table_ms": min(cost_ms),
            "dp_fill_ms": min(dp_ms),
            "score": float(dtab[T, Tp]),
        }
    scores = list(results.values())
    if len(scores) == 2:
        ref = max(abs(scores[0]), abs(scores[1]), 1e-12)
        if abs(scores[0] - scores[1]) / ref > 1e-9:
            raise ValidationError(f"backend scores disagree: {results}")
    return out


def format_report(report: dict) -> str:
    """Render one benchmark report dict as an aligned key/value table."""
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{key}:")
            for sub, subval in value.items():
                if isinstance(subval, dict):
                    body = "  ".join(f"{k}={_fmt(v)}" for k, v in subval.items())
                    lines.append(f"  {sub:<10} {body}")
                else:
                    lines.append(f"  {sub:<20} {_fmt(subval)}")
        else:
            lines.append(f"{key:<22} {_fmt(value)}")
    return "\n".join(lines)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.4g}"
    return str(v)
