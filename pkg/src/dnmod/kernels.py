"""Hot kernels: compiled extension when available, pure Python otherwise.

Set ``DNMOD_PURE_PYTHON=1`` to force the fallback (tests and benchmarks use it
to compare both paths).
"""
from __future__ import annotations

import os

from . import _kernels_py

fallback = _kernels_py
compiled = None

if os.environ.get("DNMOD_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        compiled = None

_impl = compiled if compiled is not None else fallback
BACKEND = "compiled" if compiled is not None else "python"

mul_mod = _impl.mul_mod
legendre_sum = _impl.legendre_sum
zero_filter = _impl.zero_filter
