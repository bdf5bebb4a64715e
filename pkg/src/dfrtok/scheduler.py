"""Dynamic-programming downsample schedulers.

Both schedulers maximize the selected objective over all segmentations of T
frames into exactly T' segments of length 1..U. The vanilla fill sweeps the
full (j, i, s) space; the pruned fill reorders the loops to (i, s, j) and
restricts j to the interval of states that are reachable from the start and
can still complete to (T, T'). Both produce identical tables on reachable
states, so scores and back-traced schemes agree bit-for-bit.

Tie-breaking: at equal scores the smaller segment length wins (lengths are
tried in ascending order under a strict improvement test), which makes the
output deterministic and lets the two fills be compared byte-for-byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, objective
from .core import FeasibilityError, FeatureSequence, Scheme, SchedulerParams, _freeze


@dataclass(frozen=True)
class DpTables:
    """Score table d and back-pointer table prev from one DP fill."""

    d: np.ndarray
    prev: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "d", _freeze(np.asarray(self.d)))
        object.__setattr__(self, "prev", _freeze(np.asarray(self.prev)))


def target_length(T: int, ratio: float) -> int:
    """Number of output segments for a downsampling ratio: ceil(T / ratio)."""
    if T < 1:
        raise FeasibilityError(f"T must be >= 1, got {T}")
    if not (math.isfinite(ratio) and ratio >= 1.0):
        raise FeasibilityError(f"ratio must be >= 1, got {ratio}")
    q = T / ratio
    nearest = round(q)
    # absorb binary rounding noise so e.g. T/(T/k) never ceils one too high
    if nearest >= 1 and abs(q - nearest) < 1e-9:
        return int(nearest)
    return int(math.ceil(q))


def check_feasible(T: int, Tp: int, U: int) -> None:
    if U < 1:
        raise FeasibilityError(f"U must be >= 1, got {U}")
    if not (1 <= Tp <= T):
        raise FeasibilityError(
            f"target length T'={Tp} must satisfy 1 <= T' <= T={T}"
        )
    if T > Tp * U:
        raise FeasibilityError(
            f"T={T} exceeds T'*U={Tp}*{U}={Tp * U}; no scheme can cover all frames"
        )


def _backtrace(prev: np.ndarray, T: int, Tp: int) -> np.ndarray:
    segs = np.empty(Tp, dtype=np.int64)
    j, i = T, Tp
    while i > 0:
        s = int(prev[j, i])
        if s <= 0:
            raise FeasibilityError("DP back-trace hit an unreachable state")
        segs[i - 1] = s
        j -= s
        i -= 1
    return segs


def _run_dp(costs: np.ndarray, T: int, Tp: int, U: int, pruned: bool):
    d, prev = kernels.dp_fill(costs, T, Tp, U, pruned)
    score = float(d[T, Tp])
    if not np.isfinite(score):
        raise FeasibilityError(f"no feasible scheme for T={T}, T'={Tp}, U={U}")
    segs = _backtrace(prev, T, Tp)
    return segs, score, DpTables(d=d, prev=prev)


def _jh_costs(h: FeatureSequence, U: int) -> np.ndarray:
    return kernels.cost_table(np.ascontiguousarray(h.frames, dtype=np.float64), U)


def schedule_vanilla(h: FeatureSequence, Tp: int, U: int):
    """Full-sweep DP over the cohesion objective. Returns (Scheme, score)."""
    check_feasible(h.T, Tp, U)
    segs, score, _ = _run_dp(_jh_costs(h, U), h.T, Tp, U, pruned=False)
    return Scheme(segments=segs, U=U, T=h.T), score


def schedule_pruned(h: FeatureSequence, Tp: int, U: int):
    """Reachability-pruned DP; same result as schedule_vanilla, fewer states."""
    check_feasible(h.T, Tp, U)
    segs, score, _ = _run_dp(_jh_costs(h, U), h.T, Tp, U, pruned=True)
    return Scheme(segments=segs, U=U, T=h.T), score


def dp_tables(h: FeatureSequence, Tp: int, U: int, pruned: bool = True) -> DpTables:
    """Expose the filled DP tables (diagnostics and tests)."""
    check_feasible(h.T, Tp, U)
    _, _, tables = _run_dp(_jh_costs(h, U), h.T, Tp, U, pruned)
    return tables


def count_states(T: int, Tp: int, U: int):
    """Inner-loop state visit counts: (vanilla upper bound, pruned exact).

    The vanilla fill touches at most T*T'*U (j, i, s) triples; the pruned
    count sums the exact j-interval length over every (i, s) pair, with
    empty intervals contributing nothing.
    """
    check_feasible(T, Tp, U)
    vanilla = T * Tp * U
    pruned = 0
    for i in range(1, Tp + 1):
        for s in range(1, U + 1):
            lo = max(i, s, T - (Tp - i) * U)
            hi = min(T, (i - 1) * U + s, T - (Tp - i))
            if hi >= lo:
                pruned += hi - lo + 1
    return vanilla, pruned


def _costs_for(h: FeatureSequence, U: int, name: str) -> np.ndarray:
    if name == "jh":
        return _jh_costs(h, U)
    if name == "l2":
        return objective.l2_cost_table(h, U)
    if name == "cosine":
        return objective.cosine_cost_table(h, U)
    raise FeasibilityError(f"unknown objective {name!r}")


def schedule(h: FeatureSequence, params: SchedulerParams):
    """Schedule `h` at the params' ratio with the pruned DP.

    Returns (Scheme, score) where the score is the selected objective's
    value on the returned scheme (for "cosine" that is the summed cosine,
    for the others the negated cost sum).
    """
    Tp = target_length(h.T, params.ratio)
    check_feasible(h.T, Tp, params.U)
    costs = _costs_for(h, params.U, params.objective)
    segs, score, _ = _run_dp(costs, h.T, Tp, params.U, pruned=True)
    return Scheme(segments=segs, U=params.U, T=h.T), score
