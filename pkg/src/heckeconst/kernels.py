"""Backend selection for the series kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module.  Setting ``HECKECONST_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("HECKECONST_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

convolve = _impl.convolve
reciprocal = _impl.reciprocal
normalize = _impl.normalize

__all__ = ["BACKEND", "convolve", "reciprocal", "normalize"]
