"""Free associative superalgebra over Q with a central, truncated parameter h.

Generators ``t[sign level; i, j]`` are packed into small integers whose natural
integer order is the PBW order used everywhere downstream:
plus-sign generators first, then level, row, column.  Words are tuples of
these codes; an :class:`Element` is a sparse map ``(hpow, word) -> coeff``.
No relations are imposed here; see :mod:`dyber.rtt` for normal forms.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .coeffs import Q, ONE, ZERO, qstr

MINUS = "-"
PLUS = "+"

_SIGN_SHIFT = 24
_LEVEL_SHIFT = 12
_ROW_SHIFT = 6
_IDX_MASK = 63
_LEVEL_MASK = 4095
MAX_LEVEL = _LEVEL_MASK
MAX_SIZE = 64


class DomainError(ValueError):
    """A generator index or level lies outside the allowed range."""


class UsageError(ValueError):
    """Operands from incompatible contexts, or a violated precondition."""


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def encode(sign: str, level: int, i: int, j: int) -> int:
    """Pack a generator; ``i`` and ``j`` are 1-based."""
    sbit = 1 if sign == MINUS else 0
    return (sbit << _SIGN_SHIFT) | (level << _LEVEL_SHIFT) | ((i - 1) << _ROW_SHIFT) | (j - 1)


def decode(code: int) -> tuple[str, int, int, int]:
    sign = MINUS if code >> _SIGN_SHIFT else PLUS
    level = (code >> _LEVEL_SHIFT) & _LEVEL_MASK
    return sign, level, ((code >> _ROW_SHIFT) & _IDX_MASK) + 1, (code & _IDX_MASK) + 1


def gen_sign(code: int) -> str:
    return MINUS if code >> _SIGN_SHIFT else PLUS


def gen_level(code: int) -> int:
    return (code >> _LEVEL_SHIFT) & _LEVEL_MASK


def gen_indices(code: int) -> tuple[int, int]:
    return ((code >> _ROW_SHIFT) & _IDX_MASK) + 1, (code & _IDX_MASK) + 1


def gen_parity(code: int, m: int) -> int:
    i0 = (code >> _ROW_SHIFT) & _IDX_MASK
    j0 = code & _IDX_MASK
    return (i0 >= m) ^ (j0 >= m)


def gen_degree(code: int) -> int:
    level = (code >> _LEVEL_SHIFT) & _LEVEL_MASK
    return level - 1 if code >> _SIGN_SHIFT else -level


def word_parity(word: Iterable[int], m: int) -> int:
    p = 0
    for x in word:
        p ^= gen_parity(x, m)
    return p


def gen_str(code: int) -> str:
    sign, level, i, j = decode(code)
    return f"t[{sign}{level};{i},{j}]"


@dataclass(frozen=True)
class AlgebraContext:
    """Fixed parameters of one truncated double Yangian.

    ``H`` is the h-truncation (h^k with k > H is zero) and ``N`` the series
    truncation order.
    """

    m: int
    n: int
    H: int
    N: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0 or self.m + self.n < 1:
            raise DomainError(f"need m, n >= 0 and m + n >= 1, got ({self.m}, {self.n})")
        if self.m + self.n > MAX_SIZE:
            raise DomainError(f"m + n is limited to {MAX_SIZE}")
        if self.H < 0 or self.N < 0:
            raise DomainError("truncation orders must be non-negative")

    @property
    def size(self) -> int:
        return self.m + self.n

    def index_parity(self, i: int) -> int:
        return 0 if i <= self.m else 1

    def with_orders(self, H: int | None = None, N: int | None = None) -> "AlgebraContext":
        return AlgebraContext(self.m, self.n, self.H if H is None else H, self.N if N is None else N)

    def same_algebra(self, other: "AlgebraContext") -> bool:
        return self.m == other.m and self.n == other.n

    # constructors

    def zero(self) -> "Element":
        return Element(self, {}, normal=True)

    def one(self) -> "Element":
        return Element(self, {(0, ()): ONE}, normal=True)

    def scalar(self, q, hpow: int = 0) -> "Element":
        q = Q(q)
        if q == 0 or hpow > self.H:
            return self.zero()
        return Element(self, {(hpow, ()): q}, normal=True)

    def h(self, k: int = 1) -> "Element":
        return self.scalar(1, k)

    def gen(self, sign: str, r: int, i: int, j: int) -> "Element":
        return Element(self, {(0, (self.gen_code(sign, r, i, j),)): ONE}, normal=True)

    def gen_code(self, sign: str, r: int, i: int, j: int) -> int:
        if sign not in (MINUS, PLUS):
            raise DomainError(f"sign must be '+' or '-', got {sign!r}")
        if not 1 <= r <= MAX_LEVEL:
            raise DomainError(f"level must be in 1..{MAX_LEVEL}, got {r}")
        d = self.size
        if not (1 <= i <= d and 1 <= j <= d):
            raise DomainError(f"indices ({i}, {j}) out of range 1..{d}")
        return encode(sign, r, i, j)

    def parity_of(self, code: int) -> int:
        return gen_parity(code, self.m)


def gen(ctx: AlgebraContext, sign: str, r: int, i: int, j: int) -> "Element":
    return ctx.gen(sign, r, i, j)


class Element:
    """An immutable element of the free algebra: a finite sum of
    ``coeff * h^k * word`` with k <= H.

    Arithmetic operators are *free*: ``a * b`` concatenates words.  Use a
    :class:`~dyber.rtt.RuleTable` to multiply modulo the defining relations.
    """

    __slots__ = ("ctx", "_terms", "_normal", "_hash")

    def __init__(self, ctx: AlgebraContext, terms: Mapping, normal: bool = False):
        self.ctx = ctx
        self._terms = terms
        self._normal = normal
        self._hash = None

    @classmethod
    def from_terms(cls, ctx: AlgebraContext, terms: Mapping) -> "Element":
        """Build from an arbitrary mapping, merging and truncating."""
        clean = {}
        for (k, w), c in terms.items():
            if k > ctx.H:
                continue
            key = (k, tuple(w))
            clean[key] = clean.get(key, ZERO) + Q(c)
        return cls(ctx, {key: c for key, c in clean.items() if c != 0})

    @property
    def terms(self) -> Mapping:
        return self._terms

    @property
    def is_normal(self) -> bool:
        return self._normal or not self._terms

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def items(self):
        return self._terms.items()

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    # arithmetic

    def _check(self, other: "Element"):
        if other.ctx != self.ctx:
            raise UsageError(f"context mismatch: {self.ctx} vs {other.ctx}")

    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            self._check(other)
            return other
        return self.ctx.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        return Element(self.ctx, _add(self._terms, other._terms, ONE), self._normal and other._normal)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return Element(self.ctx, _add(self._terms, other._terms, -ONE), self._normal and other._normal)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Element(self.ctx, {k: -c for k, c in self._terms.items()}, self._normal)

    def __mul__(self, other):
        if isinstance(other, Element):
            self._check(other)
            from ._kernels_select import mul_terms
            return Element(self.ctx, mul_terms(self._terms, other._terms, self.ctx.H))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, q, hpow: int = 0) -> "Element":
        """Multiply by the scalar ``q * h^hpow``."""
        q = Q(q)
        if q == 0:
            return self.ctx.zero()
        H = self.ctx.H
        if hpow == 0:
            if q == 1:
                return self
            return Element(self.ctx, {k: c * q for k, c in self._terms.items()}, self._normal)
        return Element(
            self.ctx,
            {(k + hpow, w): c * q for (k, w), c in self._terms.items() if k + hpow <= H},
            self._normal,
        )

    def hmul(self, k: int = 1) -> "Element":
        return self.scale(1, k)

    def hdiv(self, k: int = 1) -> "Element":
        """Exact division by h^k; every term must carry h-power >= k."""
        out = {}
        for (p, w), c in self._terms.items():
            if p < k:
                raise UsageError(f"term {c} h^{p} {w} is not divisible by h^{k}")
            out[(p - k, w)] = c
        return Element(self.ctx, out, self._normal)

    def truncate(self, H: int) -> "Element":
        return Element(self.ctx, {kw: c for kw, c in self._terms.items() if kw[0] <= H}, self._normal)

    def recast(self, ctx: AlgebraContext) -> "Element":
        """Move into another context of the same algebra, truncating at its H."""
        if not ctx.same_algebra(self.ctx):
            raise UsageError(f"cannot recast gl({self.ctx.m}|{self.ctx.n}) element into gl({ctx.m}|{ctx.n})")
        return Element(ctx, {kw: c for kw, c in self._terms.items() if kw[0] <= ctx.H}, self._normal)

    def h_part(self, k: int) -> "Element":
        """The coefficient of h^k, as an element with h-power 0."""
        return Element(self.ctx, {(0, w): c for (p, w), c in self._terms.items() if p == k}, self._normal)

    def parity_parts(self) -> tuple["Element", "Element"]:
        m = self.ctx.m
        even, odd = {}, {}
        for (k, w), c in self._terms.items():
            (odd if word_parity(w, m) else even)[(k, w)] = c
        return Element(self.ctx, even, self._normal), Element(self.ctx, odd, self._normal)

    def parity(self) -> int | None:
        """Parity if homogeneous, ``None`` otherwise (zero counts as even)."""
        m = self.ctx.m
        ps = {word_parity(w, m) for (_, w) in self._terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.ctx == other.ctx and self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Element({serialize(self)!r})"

    __str__ = lambda self: serialize(self)


def _add(a: Mapping, b: Mapping, s) -> dict:
    out = dict(a)
    for key, c in b.items():
        v = out.get(key, ZERO) + s * c
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def free_add(a: Element, b: Element) -> Element:
    return a + b


def free_mul(a: Element, b: Element) -> Element:
    return a * b


def scalar_mul(q, a: Element) -> Element:
    return a.scale(q)


def supercomm(a: Element, b: Element) -> Element:
    """``a b - (-1)^{|a||b|} b a`` in the free algebra, bilinear over parity parts."""
    a0, a1 = a.parity_parts()
    b0, b1 = b.parity_parts()
    out = a * b - b0 * a - b1 * a0
    if a1 and b1:
        out = out + b1 * a1
    return out


def degree(a: Element) -> int:
    """Maximum over terms of the summed generator degrees."""
    if not a:
        raise UsageError("degree of the zero element is undefined")
    return max(sum(gen_degree(x) for x in w) for (_, w) in a.terms)


# text format


def serialize(a: Element) -> str:
    if not a.terms:
        return "0"
    parts = []
    for idx, ((k, w), c) in enumerate(a.sorted_items()):
        neg = c < 0
        mag = -c if neg else c
        body = []
        if mag != 1 or (k == 0 and not w):
            body.append(qstr(mag))
        if k:
            body.append(f"h^{k}")
        body.extend(gen_str(x) for x in w)
        text = " ".join(body)
        if idx == 0:
            parts.append(("-" if neg else "") + text)
        else:
            parts.append((" - " if neg else " + ") + text)
    return "".join(parts)


_TOKEN = re.compile(
    r"\s*(?:(?P<gen>t\[\s*(?P<sg>[+\-−])\s*(?P<lv>\d+)\s*;\s*(?P<i>\d+)\s*,\s*(?P<j>\d+)\s*\])"
    r"|(?P<h>h(?:\s*\^\s*(?P<hk>\d+))?)"
    r"|(?P<num>\d+(?:\s*/\s*\d+)?)"
    r"|(?P<op>[+\-−]))"
)


def parse(text: str, ctx: AlgebraContext) -> Element:
    """Inverse of :func:`serialize`; whitespace-insensitive."""
    s = text.strip()
    if s == "0":
        return ctx.zero()
    if not s:
        raise ParseError("empty input", 0)
    terms: dict = {}
    pos = 0
    sign = 1
    sign_given = False
    coeff = None
    hpow = 0
    word: list[int] = []
    have_term = False

    def flush():
        nonlocal coeff, hpow, word, have_term, sign, sign_given
        if hpow <= ctx.H:
            c = Q(sign) * (coeff if coeff is not None else ONE)
            key = (hpow, tuple(word))
            terms[key] = terms.get(key, ZERO) + c
        coeff, hpow, word, have_term = None, 0, [], False
        sign, sign_given = 1, False

    n_terms = 0
    n = len(s)
    while pos < n:
        if s[pos].isspace():
            pos += 1
            continue
        mt = _TOKEN.match(s, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"unexpected character {s[pos]!r}", pos)
        if mt.group("op"):
            if have_term:
                flush()
                n_terms += 1
            elif sign_given:
                raise ParseError("dangling operator", pos)
            sign = -1 if mt.group("op") in "-−" else 1
            sign_given = True
        else:
            if not have_term and n_terms and not sign_given:
                raise ParseError("missing operator between terms", pos)
            if mt.group("num"):
                if have_term:
                    raise ParseError("coefficient must start a term", pos)
                coeff = Q(mt.group("num").replace(" ", ""))
            elif mt.group("h"):
                if hpow or word:
                    raise ParseError("misplaced h power", pos)
                hpow = int(mt.group("hk")) if mt.group("hk") else 1
            else:
                sg = "-" if mt.group("sg") in "-−" else "+"
                try:
                    word.append(ctx.gen_code(sg, int(mt.group("lv")), int(mt.group("i")), int(mt.group("j"))))
                except DomainError as exc:
                    raise ParseError(str(exc), pos) from None
            have_term = True
        pos = mt.end()
    if not have_term:
        raise ParseError("expression ends with an operator", pos)
    flush()
    return Element(ctx, {k: c for k, c in terms.items() if c != 0})
