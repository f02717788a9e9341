"""Pure-Python hot kernels.  ``_ckernels.pyx`` mirrors this file line for line."""
from __future__ import annotations

from .coeffs import ZERO

IMPLEMENTATION = "python"

_ROW_SHIFT = 6
_IDX_MASK = 63


def mul_terms(a, b, H):
    """Free product of two term maps, dropping h-powers above ``H``."""
    out = {}
    get = out.get
    for (ka, wa), ca in a.items():
        if ka > H:
            continue
        room = H - ka
        for (kb, wb), cb in b.items():
            if kb > room:
                continue
            key = (ka + kb, wa + wb)
            v = get(key, ZERO) + ca * cb
            if v:
                out[key] = v
            else:
                del out[key]
    return out


class Normalizer:
    """Memoized PBW straightening.

    ``rule(x, y)`` must return, for an out-of-order pair, a tuple of
    ``(hpow, word, coeff)`` whose sum equals ``x*y`` in the algebra.  Normal
    forms are built by inserting letters from the right into already-normal
    words; results are cached per ``(letter, word, h budget)``.
    """

    def __init__(self, m, rule):
        self.m = m
        self.rule = rule
        self.memo = {}

    def _odd(self, x):
        m = self.m
        return ((x >> _ROW_SHIFT) & _IDX_MASK >= m) ^ (x & _IDX_MASK >= m)

    def lmul(self, x, v, b):
        """Normal form of ``x * v`` modulo h^(b+1), for a normal word ``v``."""
        if not v:
            return {(0, (x,)): 1}
        y = v[0]
        if x < y or (x == y and not self._odd(x)):
            return {(0, (x,) + v): 1}
        key = (x, v, b)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        rest = v[1:]
        out = {}
        get = out.get
        for k, w, c in self.rule(x, y):
            if k > b:
                continue
            bb = b - k
            cur = {(0, rest): 1}
            for z in reversed(w):
                cur = self.lmul_terms(z, cur, bb)
            for (k2, w2), c2 in cur.items():
                kk = (k + k2, w2)
                val = get(kk, ZERO) + c * c2
                if val:
                    out[kk] = val
                else:
                    del out[kk]
        self.memo[key] = out
        return out

    def lmul_terms(self, x, terms, b):
        out = {}
        get = out.get
        lmul = self.lmul
        for (k, w), c in terms.items():
            if k > b:
                continue
            for (k2, w2), c2 in lmul(x, w, b - k).items():
                kk = (k + k2, w2)
                val = get(kk, ZERO) + c * c2
                if val:
                    out[kk] = val
                else:
                    del out[kk]
        return out

    def normalize_terms(self, terms, b):
        out = {}
        get = out.get
        for (k, w), c in terms.items():
            if k > b:
                continue
            bb = b - k
            cur = {(0, ()): 1}
            for z in reversed(w):
                cur = self.lmul_terms(z, cur, bb)
            for (k2, w2), c2 in cur.items():
                kk = (k + k2, w2)
                val = get(kk, ZERO) + c * c2
                if val:
                    out[kk] = val
                else:
                    del out[kk]
        return out

    def mul_normal(self, a, b, budget):
        """Normal form of ``a * b`` for normal term maps ``a`` and ``b``."""
        out = {}
        get = out.get
        lmul_terms = self.lmul_terms
        for (ka, wa), ca in a.items():
            if ka > budget:
                continue
            room = budget - ka
            sub = {kw: c for kw, c in b.items() if kw[0] <= room}
            if not sub:
                continue
            cur = sub
            for z in reversed(wa):
                cur = lmul_terms(z, cur, room)
            for (k2, w2), c2 in cur.items():
                kk = (ka + k2, w2)
                val = get(kk, ZERO) + ca * c2
                if val:
                    out[kk] = val
                else:
                    del out[kk]
        return out
