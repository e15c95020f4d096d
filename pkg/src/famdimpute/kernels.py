"""Backend selection for the hot per-iteration kernels.

The compiled extension is used when it imports; setting the environment
variable ``FAMDIMPUTE_PURE=1`` forces the numpy fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("FAMDIMPUTE_PURE"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        pass

column_moments = _impl.column_moments
center = _impl.center
reconstruct_blend = _impl.reconstruct_blend


def get_backend(name):
    """Return the kernel module for ``"python"`` or ``"cython"``."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels
        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")
