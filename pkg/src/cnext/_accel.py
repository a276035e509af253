"""Backend selection for the compiled kernels.

Setting ``CNEXT_DISABLE_NUMBA=1`` in the environment (or running without numba
installed) routes every kernel through its pure-numpy implementation.
"""

import os

_FALSEY = ("", "0", "false", "no", "off")

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

NUMBA_AVAILABLE = _numba is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("CNEXT_DISABLE_NUMBA", "0").strip().lower() in _FALSEY


def njit(*args, **kwargs):
    """``numba.njit`` with on-disk caching, or an identity decorator without numba."""
    if _numba is None:
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda fn: fn
    kwargs.setdefault("cache", True)
    return _numba.njit(*args, **kwargs)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
