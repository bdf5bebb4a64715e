"""Shared domain types and feature-matrix file I/O.

Feature matrices travel between pipeline stages either as FMAT binary files
or as plain CSV for debugging. The FMAT layout is little-endian throughout:

    magic 'FMAT' | version u16 = 1 | flags u16 = 0 | T u64 | d u64 |
    base_rate_hz f64 | payload: T*d row-major float32

CSV holds one frame per line as comma-separated decimals; the base rate is
supplied out-of-band (a flag or function argument).
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass

import numpy as np

FMAT_MAGIC = b"FMAT"
FMAT_VERSION = 1
_FMAT_HEADER = struct.Struct("<4sHHQQd")


class ValidationError(ValueError):
    """Input violates a documented precondition or invariant."""


class FormatError(ValueError):
    """Byte stream or text does not parse under the declared format."""


class FeasibilityError(ValidationError):
    """No segmentation exists for the requested (T, T', U)."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class FeatureSequence:
    """A T x d matrix of real frame features plus its source frame rate.

    Frames are stored as a read-only float32 C-contiguous array; instances
    are immutable and safe to share across threads.
    """

    frames: np.ndarray
    base_rate_hz: float = 80.0

    def __post_init__(self):
        arr = np.array(self.frames, dtype=np.float32, order="C")
        if arr.ndim != 2:
            raise ValidationError(f"frames must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValidationError(f"frames must be at least 1x1, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValidationError("frames contain NaN or infinite entries")
        rate = float(self.base_rate_hz)
        if not math.isfinite(rate) or rate <= 0:
            raise ValidationError(f"base_rate_hz must be positive and finite, got {rate}")
        object.__setattr__(self, "frames", _freeze(arr))
        object.__setattr__(self, "base_rate_hz", rate)

    @property
    def T(self) -> int:
        return self.frames.shape[0]

    @property
    def d(self) -> int:
        return self.frames.shape[1]


@dataclass(frozen=True)
class Scheme:
    """Segment lengths (s_1..s_T') splitting T frames into runs of at most U."""

    segments: np.ndarray
    U: int
    T: int

    def __post_init__(self):
        seg = np.asarray(self.segments, dtype=np.int64)
        if seg.ndim != 1 or seg.size < 1:
            raise ValidationError("segments must be a non-empty 1-D integer vector")
        if seg.min() < 1 or seg.max() > self.U:
            raise ValidationError(
                f"segment lengths must lie in [1, {self.U}], got "
                f"[{seg.min()}, {seg.max()}]"
            )
        total = int(seg.sum())
        if total != self.T:
            raise ValidationError(f"segments sum to {total}, expected T={self.T}")
        object.__setattr__(self, "segments", _freeze(np.ascontiguousarray(seg)))

    def __len__(self) -> int:
        return self.segments.size

    def starts(self) -> np.ndarray:
        """1-based start index of each segment (sigma_i)."""
        out = np.empty(len(self), dtype=np.int64)
        out[0] = 1
        np.cumsum(self.segments[:-1], out=out[1:])
        out[1:] += 1
        return out

    def ends(self) -> np.ndarray:
        """1-based end index of each segment."""
        return np.cumsum(self.segments)

    def to_json(self) -> str:
        return json.dumps(
            {"T": self.T, "U": self.U, "segments": [int(s) for s in self.segments]}
        )

    @classmethod
    def from_json(cls, text: str) -> "Scheme":
        try:
            obj = json.loads(text)
            return cls(
                segments=np.asarray(obj["segments"], dtype=np.int64),
                U=int(obj["U"]),
                T=int(obj["T"]),
            )
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise FormatError(f"malformed scheme JSON: {exc}") from exc


VALID_OBJECTIVES = ("jh", "l2", "cosine")


@dataclass(frozen=True)
class SchedulerParams:
    """Scheduler knobs: target downsampling ratio, segment cap, objective."""

    ratio: float = 2.0
    U: int = 4
    objective: str = "jh"

    def __post_init__(self):
        if not (math.isfinite(self.ratio) and self.ratio >= 1.0):
            raise ValidationError(f"ratio must be >= 1, got {self.ratio}")
        if self.U < 1:
            raise ValidationError(f"U must be >= 1, got {self.U}")
        if self.objective not in VALID_OBJECTIVES:
            raise ValidationError(
                f"objective must be one of {VALID_OBJECTIVES}, got {self.objective!r}"
            )


def save_features(seq: FeatureSequence, path, format: str = "binary") -> None:
    """Write a feature matrix to `path` in FMAT binary or CSV form.

    Binary round-trips bit-exactly; CSV preserves float32 values through a
    9-significant-digit rendering.
    """
    if format == "binary":
        header = _FMAT_HEADER.pack(
            FMAT_MAGIC, FMAT_VERSION, 0, seq.T, seq.d, seq.base_rate_hz
        )
        payload = np.ascontiguousarray(seq.frames, dtype="<f4").tobytes()
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(payload)
    elif format == "csv":
        lines = [
            ",".join(format_float(v) for v in row) for row in seq.frames.tolist()
        ]
        with open(path, "w", encoding="ascii") as fh:
            fh.write("\n".join(lines))
            fh.write("\n")
    else:
        raise ValidationError(f"unknown feature format {format!r}")


def format_float(v: float) -> str:
    # .9g round-trips any float32 exactly
    return format(float(v), ".9g")


def load_features(path, format: str = "binary", base_rate_hz: float = 80.0) -> FeatureSequence:
    """Read a feature matrix from `path`.

    For CSV the base rate is not stored in the file and is taken from
    `base_rate_hz`; for binary it comes from the header and the argument is
    ignored.
    """
    if format == "binary":
        with open(path, "rb") as fh:
            data = fh.read()
        return _parse_fmat(data, str(path))
    if format == "csv":
        with open(path, "r", encoding="ascii") as fh:
            text = fh.read()
        return _parse_csv(text, str(path), base_rate_hz)
    raise ValidationError(f"unknown feature format {format!r}")


def _parse_fmat(data: bytes, name: str) -> FeatureSequence:
    if len(data) < _FMAT_HEADER.size:
        raise FormatError(
            f"{name}: truncated header, need {_FMAT_HEADER.size} bytes, got {len(data)}"
        )
    magic, version, flags, T, d, rate = _FMAT_HEADER.unpack_from(data, 0)
    if magic != FMAT_MAGIC:
        raise FormatError(f"{name}: bad magic {magic!r}, expected {FMAT_MAGIC!r}")
    if version != FMAT_VERSION:
        raise FormatError(f"{name}: unsupported version {version}")
    if flags != 0:
        raise FormatError(f"{name}: unsupported flags {flags:#x}")
    expected = _FMAT_HEADER.size + T * d * 4
    if len(data) != expected:
        raise FormatError(
            f"{name}: payload size mismatch, expected {expected} bytes, got {len(data)}"
        )
    if T < 1 or d < 1:
        raise ValidationError(f"{name}: header declares empty matrix T={T}, d={d}")
    payload = np.frombuffer(data, dtype="<f4", offset=_FMAT_HEADER.size)
    return FeatureSequence(frames=payload.reshape(T, d), base_rate_hz=rate)


def _parse_csv(text: str, name: str, base_rate_hz: float) -> FeatureSequence:
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise FormatError(
                f"{name}:{lineno}: expected {width} columns, got {len(cells)}"
            )
        try:
            rows.append([float(c) for c in cells])
        except ValueError as exc:
            raise FormatError(f"{name}:{lineno}: {exc}") from exc
    if not rows:
        raise FormatError(f"{name}: no data rows")
    return FeatureSequence(frames=np.asarray(rows, dtype=np.float32), base_rate_hz=base_rate_hz)
