"""Kernel dispatch: compiled Cython kernels when available, Python otherwise.

Set ``FREEFID_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("FREEFID_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

if compiled_backend is not None:
    from ._ckernels import (bareiss_det, bareiss_leading_minors,
                            hyp2f1_series, taylor_step)
    BACKEND = "cython"
else:
    from ._pykernels import (bareiss_det, bareiss_leading_minors,
                             hyp2f1_series, taylor_step)
    BACKEND = "python"

__all__ = ["BACKEND", "bareiss_det", "bareiss_leading_minors", "hyp2f1_series",
           "taylor_step", "python_backend", "compiled_backend"]
