"""Kernel backend selection.

The compiled extension is used when it was built; setting ``PDYN_PURE_PYTHON=1``
forces the pure-Python fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("PDYN_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

hom_eval = _impl.hom_eval
normalize_pair = _impl.normalize_pair
orbit = _impl.orbit
multihom_eval = _impl.multihom_eval
poly_mul = _impl.poly_mul
roots_mod_p = _impl.roots_mod_p

__all__ = [
    "BACKEND",
    "hom_eval",
    "normalize_pair",
    "orbit",
    "multihom_eval",
    "poly_mul",
    "roots_mod_p",
]
