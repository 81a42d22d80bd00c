"""Bulk frame-scan kernels with two interchangeable backends.

The numba backend is the default; set ``QMODAL_DISABLE_NUMBA=1`` to force
the pure-numpy fallback (it is also selected automatically when numba is
not importable).  Both backends expose identical functions and flag
layouts; ``benchmarks/bench_kernels.py`` compares them.
"""

from __future__ import annotations

import os

from . import numpy_impl

if os.environ.get("QMODAL_DISABLE_NUMBA") == "1":
    _impl = numpy_impl
    BACKEND = "numpy"
else:
    try:
        from . import numba_impl as _impl
        BACKEND = "numba"
    except ImportError:
        _impl = numpy_impl
        BACKEND = "numpy"

classify_frames = _impl.classify_frames
semantic_flags = _impl.semantic_flags
op_distribution_flags = _impl.op_distribution_flags
fact1_all = _impl.fact1_all

__all__ = [
    "BACKEND",
    "classify_frames",
    "semantic_flags",
    "op_distribution_flags",
    "fact1_all",
]
