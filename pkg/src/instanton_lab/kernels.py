"""Selects the compiled integration kernels when available.

Set ``INSTANTON_LAB_PURE=1`` to force the pure-Python implementation.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
ym_rk4 = _kernels_py.ym_rk4
nahm_rk4 = _kernels_py.nahm_rk4

if not os.environ.get("INSTANTON_LAB_PURE"):
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        ym_rk4 = _kernels.ym_rk4
        nahm_rk4 = _kernels.nahm_rk4

__all__ = ["BACKEND", "ym_rk4", "nahm_rk4"]
