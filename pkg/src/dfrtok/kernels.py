"""Backend selection for the hot kernels.

Prefers the compiled extension when it was built; falls back to the numpy
implementation otherwise. Set DFRTOK_PURE=1 to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

_impl = _kernels_py
BACKEND = "pure"

if os.environ.get("DFRTOK_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels_c as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "compiled"


def cost_table(h, U):
    return _impl.cost_table(h, U)


def dp_fill(L, T, Tp, U, pruned):
    return _impl.dp_fill(L, T, Tp, U, pruned)


def backends() -> dict:
    """Available kernel implementations keyed by name."""
    out = {"pure": _kernels_py}
    try:
        from . import _kernels_c as _compiled
    except ImportError:
        pass
    else:
        out["compiled"] = _compiled
    return out
