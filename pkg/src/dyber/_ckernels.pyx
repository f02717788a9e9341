# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels; same contract as ``_pykernels``."""

IMPLEMENTATION = "cython"

cdef enum:
    _ROW_SHIFT = 6
    _IDX_MASK = 63


cdef inline void _acc(dict out, object key, object val):
    cdef object cur = out.get(key)
    if cur is not None:
        val = cur + val
    if val:
        out[key] = val
    elif cur is not None:
        del out[key]


def mul_terms(dict a, dict b, long H):
    """Free product of two term maps, dropping h-powers above ``H``."""
    cdef dict out = {}
    cdef long ka, kb, room
    cdef tuple wa, wb
    for (ka, wa), ca in a.items():
        if ka > H:
            continue
        room = H - ka
        for (kb, wb), cb in b.items():
            if kb > room:
                continue
            _acc(out, (ka + kb, wa + wb), ca * cb)
    return out


cdef class Normalizer:
    """Memoized PBW straightening by right-to-left letter insertion."""

    cdef public long m
    cdef public object rule
    cdef public dict memo

    def __init__(self, m, rule):
        self.m = m
        self.rule = rule
        self.memo = {}

    cdef inline bint _odd(self, long x):
        return ((x >> _ROW_SHIFT) & _IDX_MASK >= self.m) ^ (x & _IDX_MASK >= self.m)

    cpdef dict lmul(self, long x, tuple v, long b):
        """Normal form of ``x * v`` modulo h^(b+1), for a normal word ``v``."""
        cdef long y, k, bb, k2
        cdef tuple rest, w, w2, key
        cdef dict out, cur, hit
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
        for k, w, c in self.rule(x, y):
            if k > b:
                continue
            bb = b - k
            cur = {(0, rest): 1}
            for z in reversed(w):
                cur = self.lmul_terms(z, cur, bb)
            for (k2, w2), c2 in cur.items():
                _acc(out, (k + k2, w2), c * c2)
        self.memo[key] = out
        return out

    cpdef dict lmul_terms(self, long x, dict terms, long b):
        cdef dict out = {}
        cdef long k, k2
        cdef tuple w, w2
        for (k, w), c in terms.items():
            if k > b:
                continue
            for (k2, w2), c2 in self.lmul(x, w, b - k).items():
                _acc(out, (k + k2, w2), c * c2)
        return out

    def normalize_terms(self, dict terms, long b):
        cdef dict out = {}
        cdef dict cur
        cdef long k, k2, bb
        cdef tuple w, w2
        for (k, w), c in terms.items():
            if k > b:
                continue
            bb = b - k
            cur = {(0, ()): 1}
            for z in reversed(w):
                cur = self.lmul_terms(z, cur, bb)
            for (k2, w2), c2 in cur.items():
                _acc(out, (k + k2, w2), c * c2)
        return out

    def mul_normal(self, dict a, dict b, long budget):
        """Normal form of ``a * b`` for normal term maps ``a`` and ``b``."""
        cdef dict out = {}
        cdef dict cur, sub
        cdef long ka, k2, room
        cdef tuple wa, w2
        for (ka, wa), ca in a.items():
            if ka > budget:
                continue
            room = budget - ka
            sub = {kw: c for kw, c in b.items() if kw[0] <= room}
            if not sub:
                continue
            cur = sub
            for z in reversed(wa):
                cur = self.lmul_terms(z, cur, room)
            for (k2, w2), c2 in cur.items():
                _acc(out, (ka + k2, w2), ca * c2)
        return out
