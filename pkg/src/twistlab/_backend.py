# Kernel backend selection.
#
# TWISTLAB_BACKEND=numba (default when numba imports) or TWISTLAB_BACKEND=numpy.
# TWISTLAB_THREADS caps numba's thread pool.

import logging
import os
import warnings

logger = logging.getLogger(__name__)

_requested = os.environ.get("TWISTLAB_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"TWISTLAB_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

if _requested == "numba" and not HAS_NUMBA:  # pragma: no cover
    logger.warning("numba is not available; falling back to the numpy kernels")
    BACKEND = "numpy"
else:
    BACKEND = _requested


def configure_threads(value=None):
    """Cap numba's worker threads from ``value`` or TWISTLAB_THREADS.

    Returns the cap applied, or None when there is nothing to do.
    """
    raw = value if value is not None else os.environ.get("TWISTLAB_THREADS")
    if raw is None or not HAS_NUMBA:
        return None
    n = int(raw)
    if n < 1:
        raise ValueError("thread cap must be a positive integer")
    n = min(n, numba.config.NUMBA_NUM_THREADS)
    with warnings.catch_warnings():
        # threading-layer probing warns about an old TBB; the fallback layer is fine
        warnings.simplefilter("ignore", numba.NumbaWarning)
        numba.set_num_threads(n)
    return n
