"""Selects the flow kernel at import: compiled if available, else pure Python.

Set ``FOLSING_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _flowcore_py

if os.environ.get("FOLSING_PURE_PYTHON") == "1":
    _impl = _flowcore_py
else:
    try:
        from . import _flowcore as _impl
    except ImportError:
        _impl = _flowcore_py

integrate = _impl.integrate
BACKEND = "python" if _impl is _flowcore_py else "cython"
DONE, EXIT_X, EXIT_Y, UNDERFLOW, MAX_STEPS = 0, 1, 2, 3, 4
