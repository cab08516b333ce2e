"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the pure-Python
fallback. Set ``YEEGRID_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("YEEGRID_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

merge_close = _impl.merge_close
grading_levels = _impl.grading_levels
BACKEND = _impl.BACKEND
