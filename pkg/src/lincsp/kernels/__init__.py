"""Hot loops, with a compiled backend and a pure-Python fallback.

The compiled module is used when it imports; otherwise the Python one.
Both return identical results for identical inputs, including the random
streams they consume. ``use_backend`` switches explicitly (tests and the
benchmark use it).
"""

from __future__ import annotations

from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

# Byte-map size limit for the compiled packer / overlap finder.
COMPILED_COVER_LIMIT = 1 << 27

_active: ModuleType = _ckernels if _ckernels is not None else _pykernels


def available() -> list[str]:
    return ["cython", "python"] if _ckernels is not None else ["python"]


def backend() -> str:
    return _active.BACKEND


def get(name: str | None = None) -> ModuleType:
    if name is None:
        return _active
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


def use_backend(name: str) -> str:
    """Select the active backend; returns the previous one's name."""
    global _active
    prev = _active.BACKEND
    _active = get(name)
    return prev


def for_cover(n: int, k: int, ell: int, name: str | None = None) -> ModuleType:
    """Backend able to hold a cover map over ell-subsets of an n-set."""
    from math import comb

    mod = get(name)
    if mod is not _pykernels and (comb(n, ell) > COMPILED_COVER_LIMIT or k > 64):
        return _pykernels
    return mod
