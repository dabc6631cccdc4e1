"""Optional numba acceleration.

Set ``STIEFEL_LOG_NUMBA=0`` in the environment to force the pure-numpy
kernels. The flag is read once at import time; call :func:`use_numba` to
switch at runtime (tests and the kernel benchmark do this).
"""
import os

try:
    from numba import njit
    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None
    NUMBA_AVAILABLE = False

_FALSY = ("0", "false", "no", "off")

_enabled = NUMBA_AVAILABLE and (
    os.environ.get("STIEFEL_LOG_NUMBA", "1").strip().lower() not in _FALSY)


def numba_enabled():
    return _enabled


def use_numba(flag):
    """Select the numba kernels (``True``) or the numpy fallback (``False``).

    Returns the previous setting. Requesting numba when it is not importable
    leaves the fallback active.
    """
    global _enabled
    previous = _enabled
    _enabled = bool(flag) and NUMBA_AVAILABLE
    return previous


def optional_njit(*args, **kwargs):
    """Compile with ``numba.njit`` when numba is importable.

    The undecorated function stays reachable as ``.py_func`` either way, so
    loop kernels can be exercised interpreted.
    """
    def decorator(func):
        if NUMBA_AVAILABLE:
            return njit(*args, **kwargs)(func)
        func.py_func = func
        return func
    return decorator
