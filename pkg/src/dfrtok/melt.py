"""Melt-stage curriculum sampler: random segment-length proportions.

Early in training the sampler concentrates on length-1 segments (no
downsampling); as the step count approaches S_p the expected mix moves to
the target proportions, after which the Dirichlet concentration decays so
draws spread out. Each call may instead skip downsampling entirely with
probability rho.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Scheme, ValidationError
from .downsample import scheme_from_proportions

DEFAULT_P_TGT = (0.1, 0.45, 0.25, 0.2)


@dataclass(frozen=True)
class MeltConfig:
    """Curriculum hyperparameters; defaults are the production values."""

    U: int = 4
    S_p: int = 100_000
    p_tgt: tuple = DEFAULT_P_TGT
    c: float = 30.0
    epsilon: float = 1e-6
    rho: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.U < 1:
            raise ValidationError(f"U must be >= 1, got {self.U}")
        if self.S_p < 1:
            raise ValidationError(f"S_p must be >= 1, got {self.S_p}")
        p = tuple(float(x) for x in self.p_tgt)
        if len(p) != self.U:
            raise ValidationError(f"p_tgt must have U={self.U} entries, got {len(p)}")
        if any(x < 0 for x in p) or abs(sum(p) - 1.0) > 1e-6:
            raise ValidationError(f"p_tgt must be nonnegative and sum to 1, got {p}")
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValidationError(f"c must be positive, got {self.c}")
        if not (0 < self.epsilon < 1):
            raise ValidationError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if not (0 <= self.rho <= 1):
            raise ValidationError(f"rho must be in [0, 1], got {self.rho}")
        object.__setattr__(self, "p_tgt", p)

    @classmethod
    def from_json(cls, text: str) -> "MeltConfig":
        obj = json.loads(text)
        kwargs = {}
        for key in ("U", "S_p", "seed"):
            if key in obj:
                kwargs[key] = int(obj[key])
        for key in ("c", "epsilon", "rho"):
            if key in obj:
                kwargs[key] = float(obj[key])
        if "p_tgt" in obj:
            kwargs["p_tgt"] = tuple(float(x) for x in obj["p_tgt"])
        return cls(**kwargs)

    def to_json(self) -> str:
        return json.dumps(
            {
                "U": self.U,
                "S_p": self.S_p,
                "p_tgt": list(self.p_tgt),
                "c": self.c,
                "epsilon": self.epsilon,
                "rho": self.rho,
                "seed": self.seed,
            }
        )


def blend(g: int, cfg: MeltConfig) -> np.ndarray:
    """Progress-weighted mix between the all-singles mix and p_tgt, clamped.

    At progress 0 all mass sits on length 1 (no downsampling); mass on
    lengths >= 2 grows linearly with min(g/S_p, 1).
    """
    if g < 0:
        raise ValidationError(f"step must be >= 0, got {g}")
    pi = min(g / cfg.S_p, 1.0)
    d = pi * np.asarray(cfg.p_tgt)
    d[0] = 1.0 - d[1:].sum()
    return np.maximum(d, cfg.epsilon)


def concentration(g: int, cfg: MeltConfig) -> np.ndarray:
    """Dirichlet concentration: the blend scaled by c, decaying past S_p."""
    return blend(g, cfg) * cfg.c / max(1.0, g / cfg.S_p) ** 2.5


def melt_sample(g: int, cfg: MeltConfig, rng: np.random.Generator) -> Optional[np.ndarray]:
    """One curriculum draw at training step g.

    Returns None (skip downsampling) with probability rho, otherwise a
    positive proportion vector over lengths 1..U summing to 1, drawn from
    Dirichlet(concentration) via normalized Gamma variates.
    """
    if rng.random() < cfg.rho:
        return None
    alpha = concentration(g, cfg)
    draws = rng.standard_gamma(alpha)
    # guard: Gamma with tiny shape can underflow to 0
    draws = np.maximum(draws, np.finfo(np.float64).tiny)
    return draws / draws.sum()


def melt_scheme(
    g: int, T: int, cfg: MeltConfig, rng: np.random.Generator
) -> Optional[Scheme]:
    """Sample proportions at step g and realize them as a scheme for T frames."""
    p = melt_sample(g, cfg, rng)
    if p is None:
        return None
    return scheme_from_proportions(p, T, cfg.U, seed=rng)


def cool_bypass(rng: np.random.Generator, bypass_prob: float = 0.3) -> bool:
    """Fine-tuning-stage coin flip: True means this input skips downsampling."""
    if not (0 <= bypass_prob <= 1):
        raise ValidationError(f"bypass_prob must be in [0, 1], got {bypass_prob}")
    return bool(rng.random() < bypass_prob)
