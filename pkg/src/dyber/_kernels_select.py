"""Pick the compiled kernels when built, else the pure-Python ones.

Set ``DYBER_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

if os.environ.get("DYBER_PURE_PYTHON"):
    from ._pykernels import IMPLEMENTATION, Normalizer, mul_terms
else:
    try:
        from ._ckernels import IMPLEMENTATION, Normalizer, mul_terms
    except ImportError:
        from ._pykernels import IMPLEMENTATION, Normalizer, mul_terms

__all__ = ["IMPLEMENTATION", "Normalizer", "mul_terms"]
