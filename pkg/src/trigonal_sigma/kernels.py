"""Kernel selection: the compiled extension when it imports, numpy otherwise.

Set TRIGONAL_SIGMA_PURE=1 to force the numpy fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if not os.environ.get("TRIGONAL_SIGMA_PURE"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

continue_roots = _impl.continue_roots
theta_sums = _impl.theta_sums
segment_crossings = _impl.segment_crossings
