"""Kernel backend selection.

Hot loops have two implementations: numba ``@njit`` kernels and a pure
numpy vectorised path.  Selection happens once at import time from the
``PROJDIM_NUMBA`` environment variable:

  * unset / ``1`` / ``on``  -- use numba when importable (the default),
  * ``0`` / ``off`` / ``false`` / ``no`` -- force the numpy path.

``bench/bench_backends.py`` times the two paths against each other.
"""

import os

_FLAG = os.environ.get("PROJDIM_NUMBA", "1").strip().lower()
_WANT_NUMBA = _FLAG not in ("0", "off", "false", "no")

if _WANT_NUMBA:
    try:
        from numba import njit  # noqa: F401
        NUMBA_ENABLED = True
    except ImportError:
        NUMBA_ENABLED = False
else:
    NUMBA_ENABLED = False


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
