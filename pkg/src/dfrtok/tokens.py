"""Token streams pairing a content code with a duration, and their wire form.

Wire layout (all little-endian):

    magic 'DFRT' | version u16 = 1 | K u64 | U u8 | base_rate_hz f64 |
    count u64 | content plane | duration plane

Each plane packs one fixed-width field per token, LSB-first within the
plane, padded to a whole number of bytes. Content fields are ceil(log2 K)
bits wide; duration fields are ceil(log2 U) bits wide and store duration-1
so a duration of U fits exactly. Reported bitrates use the fractional
log2(K)/log2(U) widths, not the packed integer widths.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .core import FormatError, ValidationError, _freeze

TOKEN_MAGIC = b"DFRT"
TOKEN_VERSION = 1
_HEADER = struct.Struct("<4sHQBdQ")


def content_bits(K: int) -> int:
    """Packed field width for codes in [0, K)."""
    return int(K - 1).bit_length()


def duration_bits(U: int) -> int:
    """Packed field width for durations stored as duration-1."""
    return int(U - 1).bit_length()


@dataclass(frozen=True)
class TokenStream:
    """Per-segment (code, duration) pairs plus the stream header fields."""

    codes: np.ndarray
    durations: np.ndarray
    K: int
    U: int
    base_rate_hz: float

    def __post_init__(self):
        codes = np.asarray(self.codes, dtype=np.int64).reshape(-1)
        durs = np.asarray(self.durations, dtype=np.int64).reshape(-1)
        if codes.size != durs.size:
            raise ValidationError(
                f"{codes.size} codes vs {durs.size} durations; counts must match"
            )
        if not (1 <= self.K <= 2**63 - 1):
            raise ValidationError(f"K must be in [1, 2^63), got {self.K}")
        if not (1 <= self.U <= 255):
            raise ValidationError(f"U must be in [1, 255], got {self.U}")
        if codes.size and (codes.min() < 0 or codes.max() >= self.K):
            raise ValidationError(f"codes must lie in [0, {self.K})")
        if durs.size and (durs.min() < 1 or durs.max() > self.U):
            raise ValidationError(f"durations must lie in [1, {self.U}]")
        if not (math.isfinite(self.base_rate_hz) and self.base_rate_hz > 0):
            raise ValidationError(f"base_rate_hz must be positive, got {self.base_rate_hz}")
        object.__setattr__(self, "codes", _freeze(codes))
        object.__setattr__(self, "durations", _freeze(durs))

    def __len__(self) -> int:
        return self.codes.size

    @property
    def total_frames(self) -> int:
        """Original frame count T recovered from the duration channel."""
        return int(self.durations.sum())


def _pack_plane(values: np.ndarray, width: int) -> bytes:
    if width == 0 or values.size == 0:
        return b""
    acc = 0
    for i, v in enumerate(values.tolist()):
        acc |= v << (i * width)
    return acc.to_bytes((values.size * width + 7) // 8, "little")


def _unpack_plane(buf: bytes, width: int, count: int, what: str) -> np.ndarray:
    if width == 0 or count == 0:
        return np.zeros(count, dtype=np.int64)
    acc = int.from_bytes(buf, "little")
    if acc >> (count * width):
        raise FormatError(f"nonzero padding bits in {what} plane")
    mask = (1 << width) - 1
    return np.fromiter(
        ((acc >> (i * width)) & mask for i in range(count)), dtype=np.int64, count=count
    )


def pack(ts: TokenStream) -> bytes:
    """Serialize a stream; unpack(pack(ts)) reproduces it bit-exactly."""
    header = _HEADER.pack(
        TOKEN_MAGIC, TOKEN_VERSION, ts.K, ts.U, ts.base_rate_hz, len(ts)
    )
    content = _pack_plane(ts.codes, content_bits(ts.K))
    duration = _pack_plane(ts.durations - 1, duration_bits(ts.U))
    return header + content + duration


def unpack(data: bytes) -> TokenStream:
    """Parse DFRT bytes back into a TokenStream, validating every field."""
    if len(data) < _HEADER.size:
        raise FormatError(
            f"truncated header: need {_HEADER.size} bytes, got {len(data)}"
        )
    magic, version, K, U, rate, count = _HEADER.unpack_from(data, 0)
    if magic != TOKEN_MAGIC:
        raise FormatError(f"bad magic {magic!r} at offset 0, expected {TOKEN_MAGIC!r}")
    if version != TOKEN_VERSION:
        raise FormatError(f"unsupported version {version} at offset 4")
    cw, dw = content_bits(K), duration_bits(U)
    c_len = (count * cw + 7) // 8
    d_len = (count * dw + 7) // 8
    c_off = _HEADER.size
    d_off = c_off + c_len
    expected = d_off + d_len
    if len(data) < expected:
        raise FormatError(
            f"truncated planes: expected {expected} bytes total, got {len(data)} "
            f"(content plane at {c_off}, duration plane at {d_off})"
        )
    if len(data) > expected:
        raise FormatError(f"{len(data) - expected} trailing bytes after offset {expected}")
    codes = _unpack_plane(data[c_off:d_off], cw, count, "content")
    stored = _unpack_plane(data[d_off:expected], dw, count, "duration")
    durations = stored + 1
    if codes.size and codes.max() >= K:
        bad = int(np.argmax(codes >= K))
        raise FormatError(f"code {int(codes[bad])} >= K={K} at token {bad}")
    if durations.size and durations.max() > U:
        bad = int(np.argmax(durations > U))
        raise FormatError(f"duration {int(durations[bad])} > U={U} at token {bad}")
    try:
        return TokenStream(codes=codes, durations=durations, K=K, U=U, base_rate_hz=rate)
    except ValidationError as exc:
        raise FormatError(str(exc)) from exc


def bitrate(ts: TokenStream) -> dict:
    """Content/duration bitrates and the mean token rate of a stream.

    Bitrates are information-theoretic: token rate times log2(K) for content
    and log2(U) for the duration channel.
    """
    if len(ts) == 0:
        raise ValidationError("bitrate of an empty stream is undefined")
    seconds = ts.total_frames / ts.base_rate_hz
    rate = len(ts) / seconds
    return {
        "content_bps": rate * math.log2(ts.K),
        "duration_bps": rate * math.log2(ts.U),
        "mean_token_rate_hz": rate,
    }
