"""Kernel selection: compiled extension when available, pure Python otherwise.

Set PEKR_PURE_PYTHON=1 to force the fallback (used by the benchmark and by
tests that compare the two implementations).
"""

import os

from . import fallback

if os.environ.get("PEKR_PURE_PYTHON") == "1":
    _impl = fallback
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = fallback

IMPL = _impl.IMPL
enumeration_counts = _impl.enumeration_counts
CliqueKernel = _impl.CliqueKernel

__all__ = ["IMPL", "enumeration_counts", "CliqueKernel", "fallback"]
