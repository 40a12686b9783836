"""Numba detection.

Set ``VULNGRAPH_DISABLE_NUMBA=1`` to force the pure-numpy kernels, e.g. when
debugging or on platforms without a working numba.
"""

import os

_FLAG = "VULNGRAPH_DISABLE_NUMBA"


def _disabled_by_env() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() not in ("", "0", "false", "no")


try:
    if _disabled_by_env():
        raise ImportError(f"disabled via {_FLAG}")
    import numba

    HAVE_NUMBA = True
    njit = numba.njit
except ImportError:
    numba = None
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        # @njit and @njit(...) both become no-ops
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


def default_backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def resolve_backend(backend=None) -> str:
    if backend is None:
        return default_backend()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}; expected 'numba' or 'numpy'")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError(f"numba backend requested but numba is unavailable ({_FLAG} set?)")
    return backend
