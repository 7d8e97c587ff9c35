"""Backend dispatch for the hot trace-query kernels.

Set BEACONSENSE_BACKEND=numpy to force the pure-numpy path, =numba to
require the jitted path (ImportError if numba is missing). Unset, or
"auto": numba when importable, numpy otherwise.
"""

import os

from ._kernels_numpy import NO_VALUE

__all__ = ["NO_VALUE", "windowed_max_many", "active_backend"]

_requested = os.environ.get("BEACONSENSE_BACKEND", "auto").strip().lower() or "auto"
if _requested not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"BEACONSENSE_BACKEND must be 'numba', 'numpy' or 'auto', got {_requested!r}"
    )

if _requested == "numpy":
    from ._kernels_numpy import windowed_max_many

    _backend = "numpy"
else:
    try:
        from ._kernels_numba import windowed_max_many

        _backend = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from ._kernels_numpy import windowed_max_many

        _backend = "numpy"


def active_backend() -> str:
    """Name of the kernel backend chosen at import time."""
    return _backend
