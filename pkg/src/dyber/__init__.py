"""Exact computations in the double Yangian DY(gl(m|n)) truncated at u-order N
and h-order H.

The commonly used entry points are re-exported here; the submodules hold the
rest.
"""
from __future__ import annotations

from ._kernels_select import IMPLEMENTATION
from .algebra import AlgebraContext, DomainError, Element, ParseError, UsageError, parse, serialize
from .coeffs import BACKEND as COEFF_BACKEND
from .rtt import ENGINE_VERSION, CapError, RuleTable, StaleCacheError, default_cap, shared_table
from .series import SeriesMatrix, TruncSeries

__version__ = "0.1.0"

__all__ = [
    "AlgebraContext",
    "Element",
    "parse",
    "serialize",
    "RuleTable",
    "shared_table",
    "default_cap",
    "TruncSeries",
    "SeriesMatrix",
    "CapError",
    "StaleCacheError",
    "UsageError",
    "DomainError",
    "ParseError",
    "ENGINE_VERSION",
    "IMPLEMENTATION",
    "COEFF_BACKEND",
]
