"""Finite scalar quantization: bounded per-dimension rounding to a code index.

Each dimension k is squashed with tanh, scaled to (levels_k - 1) / 2 steps,
and rounded half-away-from-zero; the resulting digits compose into a single
mixed-radix code in [0, prod(levels)). Dequantization returns the normalized
lattice point in [-1, 1]^d.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import ValidationError, _freeze


@dataclass(frozen=True)
class FsqSpec:
    """Per-dimension quantization levels; all odd >= 3 so 0 maps to itself."""

    levels: tuple

    def __post_init__(self):
        lv = tuple(int(x) for x in self.levels)
        if not lv:
            raise ValidationError("levels must be non-empty")
        for x in lv:
            if x < 3 or x % 2 == 0:
                raise ValidationError(f"each level must be odd and >= 3, got {x}")
        object.__setattr__(self, "levels", lv)

    @property
    def d(self) -> int:
        return len(self.levels)

    @property
    def K(self) -> int:
        return math.prod(self.levels)

    @classmethod
    def from_json(cls, text: str) -> "FsqSpec":
        return cls(levels=tuple(json.loads(text)["levels"]))

    def to_json(self) -> str:
        return json.dumps({"levels": list(self.levels)})


def _weights(spec: FsqSpec) -> np.ndarray:
    # weight of digit k is the product of all later levels
    w = np.ones(spec.d, dtype=np.int64)
    for k in range(spec.d - 2, -1, -1):
        w[k] = w[k + 1] * spec.levels[k + 1]
    return w


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def fsq_quantize_seq(rows: np.ndarray, spec: FsqSpec) -> np.ndarray:
    """Quantize each row of a T' x d matrix to a code index in [0, K)."""
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[1] != spec.d:
        raise ValidationError(
            f"rows must be 2-D with width {spec.d}, got shape {rows.shape}"
        )
    if not np.isfinite(rows).all():
        raise ValidationError("rows contain non-finite entries")
    half = (np.asarray(spec.levels, dtype=np.float64) - 1.0) / 2.0
    q = _round_half_away(np.tanh(rows) * half)
    digits = (q + half).astype(np.int64)
    return digits @ _weights(spec)


def fsq_quantize(v, spec: FsqSpec) -> int:
    """Quantize one d-dimensional vector to its code index."""
    v = np.asarray(v, dtype=np.float64).reshape(1, -1)
    return int(fsq_quantize_seq(v, spec)[0])


def code_to_digits(codes, spec: FsqSpec) -> np.ndarray:
    """Mixed-radix decomposition of code indices into per-dimension digits."""
    codes = np.asarray(codes, dtype=np.int64)
    if codes.size and (codes.min() < 0 or codes.max() >= spec.K):
        raise ValidationError(f"codes must lie in [0, {spec.K})")
    digits = np.empty(codes.shape + (spec.d,), dtype=np.int64)
    rem = codes.copy()
    for k in range(spec.d - 1, -1, -1):
        digits[..., k] = rem % spec.levels[k]
        rem //= spec.levels[k]
    return digits


def digits_to_code(digits, spec: FsqSpec) -> np.ndarray:
    """Inverse of code_to_digits."""
    digits = np.asarray(digits, dtype=np.int64)
    return digits @ _weights(spec)


def fsq_dequantize(code: int, spec: FsqSpec) -> np.ndarray:
    """Normalized lattice point for a code: each component in [-1, 1]."""
    if not (0 <= code < spec.K):
        raise ValidationError(f"code {code} out of range [0, {spec.K})")
    half = (np.asarray(spec.levels, dtype=np.float64) - 1.0) / 2.0
    q = code_to_digits(np.int64(code), spec) - half
    return q / half
