"""Pick the compiled kernels when present, NumPy fallback otherwise.

Set ``COHERENT_AMP_PURE=1`` to force the fallback.
"""

import os

from coherent_amp import _purepy

if os.environ.get("COHERENT_AMP_PURE", "") == "1":
    kernels = _purepy
    BACKEND = "python"
else:
    try:
        from coherent_amp import _kernels as kernels
        BACKEND = "cython"
    except ImportError:
        kernels = _purepy
        BACKEND = "python"

FEASIBLE = _purepy.FEASIBLE
INFEASIBLE = _purepy.INFEASIBLE
INCONCLUSIVE = _purepy.INCONCLUSIVE


def thread_count() -> int:
    """Threads for parallel kernels from ``COHERENT_AMP_THREADS``; 0 means default."""
    raw = os.environ.get("COHERENT_AMP_THREADS", "").strip()
    if not raw:
        return 0
    try:
        return max(0, int(raw))
    except ValueError:
        return 0
