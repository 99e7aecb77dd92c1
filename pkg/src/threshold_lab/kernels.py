"""Backend selection for the bitmask kernels.

The compiled extension is preferred. Setting ``THRESHOLD_LAB_PURE=1`` in the
environment forces the pure-Python kernels (useful for benchmarking and for
checking that both backends agree).
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("THRESHOLD_LAB_PURE"):
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "compiled" if _impl is not _pykernels else "python"

intersection_sizes = _impl.intersection_sizes
cover_dp = _impl.cover_dp
upset_indicator = _impl.upset_indicator
indicator_profile = _impl.indicator_profile
minimal_masks = _impl.minimal_masks

__all__ = [
    "BACKEND",
    "cover_dp",
    "indicator_profile",
    "intersection_sizes",
    "minimal_masks",
    "upset_indicator",
]
