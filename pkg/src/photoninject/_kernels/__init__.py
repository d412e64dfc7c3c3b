"""Kernel backend selection: compiled extension with numpy fallback.

The compiled kernel is used when the extension built; setting
PHOTONINJECT_PURE=1 forces the numpy fallback. `BACKEND` records which
implementation is live.
"""

import os

_force_pure = os.environ.get("PHOTONINJECT_PURE", "") == "1"

if _force_pure:
    from .ncc_np import pairwise_max_ncc
    BACKEND = "numpy"
else:
    try:
        from .ncc_cy import pairwise_max_ncc
        BACKEND = "compiled"
    except ImportError:
        from .ncc_np import pairwise_max_ncc
        BACKEND = "numpy"

__all__ = ["pairwise_max_ncc", "BACKEND"]
