"""Kernel selection: compiled extension when available, pure twin otherwise.

Set COINFREE_PURE=1 to force the pure-Python implementations.
"""
from __future__ import annotations

import os

if os.environ.get("COINFREE_PURE"):
    from . import _fallback as _impl
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _fallback as _impl

BACKEND: str = "compiled" if _impl.__name__.endswith("_speedups") else "pure"

free_reduce_ints = _impl.free_reduce_ints
brute_conjugator = _impl.brute_conjugator
eval_track_grid = _impl.eval_track_grid
