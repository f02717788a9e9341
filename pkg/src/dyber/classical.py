"""The enveloping algebra of the loop superalgebra of gl(m|n), in PBW form.

Basis symbols are e_ij(r) = (i, j, r) with r any integer.  Products are
brought to increasing order (by (r, i, j)) with the bracket

    [e_ij(r), e_kl(s)] = d_kj e_il(r+s) - d_il e_kj(r+s) (-1)^{(i+j)(k+l)}

where i, j, k, l stand for their parities in the sign.  This module knows
nothing about h or the RTT rules, which is what makes it a useful oracle.
"""
from __future__ import annotations

from .algebra import AlgebraContext, Element, decode
from .coeffs import ONE, Q, ZERO

Sym = tuple  # (i, j, r)


class ClassicalElement:
    __slots__ = ("m", "n", "terms")

    def __init__(self, m: int, n: int, terms: dict | None = None):
        self.m, self.n = m, n
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    # construction

    @classmethod
    def basis(cls, m, n, i, j, r) -> "ClassicalElement":
        return cls(m, n, {((i, j, r),): ONE})

    @classmethod
    def identity_loop(cls, m, n, r) -> "ClassicalElement":
        """I(r) = sum_i e_ii(r)."""
        return cls(m, n, {((i, i, r),): ONE for i in range(1, m + n + 1)})

    @classmethod
    def scalar(cls, m, n, q) -> "ClassicalElement":
        return cls(m, n, {(): Q(q)})

    def _par(self, i):
        return 0 if i <= self.m else 1

    def sym_parity(self, s: Sym) -> int:
        return self._par(s[0]) ^ self._par(s[1])

    def word_parity(self, w) -> int:
        p = 0
        for s in w:
            p ^= self.sym_parity(s)
        return p

    # arithmetic

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, ZERO) + c
        return ClassicalElement(self.m, self.n, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, q):
        q = Q(q)
        return ClassicalElement(self.m, self.n, {w: c * q for w, c in self.terms.items()})

    def __mul__(self, other):
        acc: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                _add_into(acc, self._normal_word(w1 + w2), c1 * c2)
        return ClassicalElement(self.m, self.n, acc)

    def __eq__(self, other):
        return isinstance(other, ClassicalElement) and (self.m, self.n) == (other.m, other.n) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def bracket_syms(self, x: Sym, y: Sym) -> dict:
        i, j, r = x
        k, l, s = y
        out: dict = {}
        if k == j:
            _add_into(out, {((i, l, r + s),): ONE}, ONE)
        if i == l:
            sign = -1 if (self.sym_parity(x) & self.sym_parity(y)) else 1
            _add_into(out, {((k, j, r + s),): ONE}, Q(-sign))
        return out

    def supercomm(self, other) -> "ClassicalElement":
        """Graded commutator, bilinear over parity-homogeneous parts."""
        out = ClassicalElement(self.m, self.n)
        for w1, c1 in self.terms.items():
            p1 = self.word_parity(w1)
            for w2, c2 in other.terms.items():
                p2 = self.word_parity(w2)
                a = ClassicalElement(self.m, self.n, {w1: c1})
                b = ClassicalElement(self.m, self.n, {w2: c2})
                out = out + a * b - (b * a).scale(-1 if (p1 & p2) else 1)
        return out

    def _normal_word(self, w) -> dict:
        """PBW form of a word as {word: coeff}."""
        return _normalize(self, tuple(w), {})

    def __repr__(self):
        parts = []
        for w, c in sorted(self.terms.items()):
            parts.append(f"{c}*" + "".join(f"e{i}{j}({r})" for i, j, r in w))
        return " + ".join(parts) or "0"


def _key(s: Sym):
    return (s[2], s[0], s[1])


def _normalize(ce: ClassicalElement, w: tuple, memo: dict) -> dict:
    hit = memo.get(w)
    if hit is not None:
        return hit
    for p in range(len(w) - 1):
        x, y = w[p], w[p + 1]
        kx, ky = _key(x), _key(y)
        if kx > ky or (kx == ky and ce.sym_parity(x)):
            out: dict = {}
            if kx == ky:
                # x x = 1/2 [x, x] for odd x
                for v, c in ce.bracket_syms(x, x).items():
                    for ww, cc in _normalize(ce, w[:p] + v + w[p + 2:], memo).items():
                        _add_into(out, {ww: cc}, c * Q(1, 2))
            else:
                sign = -1 if (ce.sym_parity(x) & ce.sym_parity(y)) else 1
                for ww, cc in _normalize(ce, w[:p] + (y, x) + w[p + 2:], memo).items():
                    _add_into(out, {ww: cc}, Q(sign))
                for v, c in ce.bracket_syms(x, y).items():
                    for ww, cc in _normalize(ce, w[:p] + v + w[p + 2:], memo).items():
                        _add_into(out, {ww: cc}, c)
            memo[w] = out
            return out
    out = {w: ONE}
    memo[w] = out
    return out


def _add_into(acc: dict, terms: dict, c):
    for w, v in terms.items():
        s = acc.get(w, ZERO) + c * v
        if s:
            acc[w] = s
        else:
            acc.pop(w, None)


def classical_image(a: Element) -> ClassicalElement:
    """Image of the h^0 part of ``a`` under t^(r)_ij -> (-1)^i e_ij(r-1),
    t^(-r)_ij -> (-1)^i e_ij(-r)."""
    m, n = a.ctx.m, a.ctx.n
    out = ClassicalElement(m, n)
    for (k, w), c in a.terms.items():
        if k:
            continue
        term = ClassicalElement.scalar(m, n, c)
        for g in w:
            sign, r, i, j = decode(g)
            deg = r - 1 if sign == "-" else -r
            s = -1 if i > m else 1
            term = term * ClassicalElement.basis(m, n, i, j, deg).scale(s)
        out = out + term
    return out


__all__ = ["ClassicalElement", "classical_image"]
