"""Scoring-kernel backend selection.

Imports the compiled extension when available and falls back to the
pure-Python implementation otherwise. Set PODSUM_PURE_PYTHON=1 to force
the fallback (used by the benchmark and for debugging).
"""

from __future__ import annotations

import os

from podsum import _kernels_py

if os.environ.get("PODSUM_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from podsum import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND
lcs_length = _impl.lcs_length
sorted_overlap = _impl.sorted_overlap
