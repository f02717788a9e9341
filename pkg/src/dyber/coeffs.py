"""Exact rational scalars: gmpy2.mpq when available, Fraction otherwise."""
from __future__ import annotations

try:
    from gmpy2 import mpq as Q
    BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Q
    BACKEND = "fractions"

ZERO = Q(0)
ONE = Q(1)


def qstr(q) -> str:
    """Canonical text: ``3``, ``-3/2``."""
    q = Q(q)
    num, den = int(q.numerator), int(q.denominator)
    return str(num) if den == 1 else f"{num}/{den}"
