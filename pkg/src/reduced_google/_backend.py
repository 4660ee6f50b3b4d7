"""Select the kernel implementation at import time.

The compiled extension is preferred.  Set ``REDUCED_GOOGLE_BACKEND=python``
to force the numpy fallback (useful for debugging and benchmarking).
"""

import logging
import os

log = logging.getLogger(__name__)

_requested = os.environ.get("REDUCED_GOOGLE_BACKEND", "auto").lower()

if _requested == "python":
    from . import _pykernels as kernels

    BACKEND = "python"
else:
    try:
        from . import _ckernels as kernels

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        log.debug("compiled kernels unavailable, using numpy fallback")
        from . import _pykernels as kernels

        BACKEND = "python"

__all__ = ["BACKEND", "kernels"]
