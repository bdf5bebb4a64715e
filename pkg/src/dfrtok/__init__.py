"""Dynamic frame-rate scheduling and tokenization toolkit.

Operates on plain frame-feature matrices: schedules variable-length segment
merges with a dynamic program, averages segments, quantizes rows to code
indices, and serializes (code, duration) token streams with exact bitrate
accounting. Hot kernels run from a compiled extension when built, with a
numpy fallback selected at import (see `dfrtok.kernels.BACKEND`).
"""

from .core import (
    FeasibilityError,
    FeatureSequence,
    FormatError,
    Scheme,
    SchedulerParams,
    ValidationError,
    load_features,
    save_features,
)
from .downsample import (
    downsample_compact,
    downsample_expanded,
    downsample_fast,
    scheme_from_proportions,
)
from .fsq import FsqSpec, fsq_dequantize, fsq_quantize, fsq_quantize_seq
from .kernels import BACKEND
from .melt import MeltConfig, cool_bypass, melt_sample, melt_scheme
from .objective import (
    CostTable,
    PhoneBoundaries,
    alignment_cost,
    objective_cosine,
    objective_jh,
    objective_l2,
    precompute_costs,
    segment_cost,
)
from .scheduler import (
    count_states,
    schedule,
    schedule_pruned,
    schedule_vanilla,
    target_length,
)
from .streaming import ChunkPlan, chunk_plan, crossfade, stream_schedule
from .tokens import TokenStream, bitrate, pack, unpack

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ChunkPlan",
    "CostTable",
    "FeasibilityError",
    "FeatureSequence",
    "FormatError",
    "FsqSpec",
    "MeltConfig",
    "PhoneBoundaries",
    "Scheme",
    "SchedulerParams",
    "TokenStream",
    "ValidationError",
    "alignment_cost",
    "bitrate",
    "chunk_plan",
    "cool_bypass",
    "count_states",
    "crossfade",
    "downsample_compact",
    "downsample_expanded",
    "downsample_fast",
    "fsq_dequantize",
    "fsq_quantize",
    "fsq_quantize_seq",
    "load_features",
    "melt_sample",
    "melt_scheme",
    "objective_cosine",
    "objective_jh",
    "objective_l2",
    "pack",
    "precompute_costs",
    "save_features",
    "scheme_from_proportions",
    "schedule",
    "schedule_pruned",
    "schedule_vanilla",
    "segment_cost",
    "target_length",
    "unpack",
]
