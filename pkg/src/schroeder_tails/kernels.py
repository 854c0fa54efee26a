"""Kernel dispatch: compiled Cython module when importable, numpy otherwise.

Set ``SCHROEDER_TAILS_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _fallback

BACKEND = "python"
if not os.environ.get("SCHROEDER_TAILS_PURE_PYTHON"):
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _fallback
    else:
        BACKEND = "compiled"
else:
    _impl = _fallback

schroeder_sweep = _impl.schroeder_sweep
poincare_recursion = _impl.poincare_recursion
reduce_iterate = _impl.reduce_iterate

__all__ = ["BACKEND", "schroeder_sweep", "poincare_recursion", "reduce_iterate"]
