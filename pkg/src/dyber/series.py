"""Truncated one-variable series with algebra coefficients, matrices over them,
and the two-leg operator arithmetic used to read off the RTT relations.

A ``down`` series stores the coefficients of u^0, u^-1, ..., u^-N; an ``up``
series those of u^0, ..., u^N.  Products are exact modulo (u-order > N,
h-order > H).  Every multiplication takes an optional *ring*: ``FREE`` keeps
words as written, a :class:`~dyber.rtt.RuleTable` reduces to normal form.
"""
from __future__ import annotations

import re
from math import comb
from typing import Callable, Sequence

from .algebra import AlgebraContext, Element, UsageError, serialize, word_parity
from .coeffs import Q

DOWN = "down"
UP = "up"


class SingularityError(ArithmeticError):
    """Neumann inversion was asked for a matrix that is not 1 + O(h)."""


class _FreeRing:
    name = "free"

    def mul(self, a: Element, b: Element) -> Element:
        return a * b

    def dot(self, pairs) -> Element:
        out = None
        for a, b in pairs:
            p = a * b
            out = p if out is None else out + p
        return out

    def reduce(self, a: Element) -> Element:
        return a


FREE = _FreeRing()


def _sum(elems: Sequence[Element], ctx: AlgebraContext) -> Element:
    out = ctx.zero()
    for e in elems:
        out = out + e
    return out


# ---------------------------------------------------------------- series


class TruncSeries:
    __slots__ = ("ctx", "direction", "coeffs")

    def __init__(self, ctx: AlgebraContext, direction: str, coeffs: Sequence[Element]):
        if direction not in (DOWN, UP):
            raise UsageError(f"direction must be 'down' or 'up', got {direction!r}")
        self.ctx = ctx
        self.direction = direction
        self.coeffs = tuple(coeffs)

    @classmethod
    def constant(cls, ctx, direction, value, order: int | None = None) -> "TruncSeries":
        order = ctx.N if order is None else order
        c0 = value if isinstance(value, Element) else ctx.scalar(value)
        return cls(ctx, direction, [c0] + [ctx.zero()] * order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Element:
        return self.coeffs[k]

    def _check(self, other: "TruncSeries"):
        if other.direction != self.direction:
            raise UsageError("series direction mismatch")
        if other.ctx != self.ctx:
            raise UsageError("series context mismatch")

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        n = min(self.order, other.order) + 1
        return TruncSeries(self.ctx, self.direction, [self.coeffs[k] + other.coeffs[k] for k in range(n)])

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        n = min(self.order, other.order) + 1
        return TruncSeries(self.ctx, self.direction, [self.coeffs[k] - other.coeffs[k] for k in range(n)])

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.ctx, self.direction, [-c for c in self.coeffs])

    def scale(self, q) -> "TruncSeries":
        return TruncSeries(self.ctx, self.direction, [c.scale(q) for c in self.coeffs])

    def mul(self, other: "TruncSeries", ring=FREE) -> "TruncSeries":
        """Cauchy product truncated at the smaller order."""
        self._check(other)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            pairs = [(a[p], b[k - p]) for p in range(k + 1) if a[p] and b[k - p]]
            out.append(ring.dot(pairs) if pairs else self.ctx.zero())
        return TruncSeries(self.ctx, self.direction, out)

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise UsageError(f"cannot extend a series of order {self.order} to {order}")
        return TruncSeries(self.ctx, self.direction, self.coeffs[: order + 1])

    def map(self, fn: Callable[[Element], Element], ctx: AlgebraContext | None = None) -> "TruncSeries":
        return TruncSeries(ctx or self.ctx, self.direction, [fn(c) for c in self.coeffs])

    def recast(self, ctx: AlgebraContext) -> "TruncSeries":
        return self.map(lambda c: c.recast(ctx), ctx)

    def reduce(self, ring) -> "TruncSeries":
        return self.map(ring.reduce)

    def inverse(self, ring=FREE) -> "TruncSeries":
        """Neumann inverse of a series 1 - K whose K carries h everywhere."""
        one = TruncSeries.constant(self.ctx, self.direction, 1, self.order)
        K = one - self
        _require_h_divisible(K.coeffs)
        inv = one
        for _ in range(self.ctx.H):
            inv = one + K.mul(inv, ring)
        return inv

    def shift(self, c: int) -> "TruncSeries":
        """The series s(u + c*h).

        Down series stay exact at their order.  For up series the coefficient
        of u^k needs input coefficients up to k + H, so the result has order
        ``self.order - H``.
        """
        c = int(c)
        if c == 0:
            # keep the order contract of the general case
            return self if self.direction == DOWN else self.truncate(self.order - self.ctx.H)
        ctx, H = self.ctx, self.ctx.H
        src = self.coeffs
        if self.direction == DOWN:
            N = self.order
            acc: list[list[Element]] = [[] for _ in range(N + 1)]
            acc[0].append(src[0])
            for r in range(1, N + 1):
                if not src[r]:
                    continue
                for k in range(0, min(H, N - r) + 1):
                    # (u + ch)^(-r) = sum_k binom(-r, k) c^k h^k u^(-r-k)
                    coef = (-1) ** k * comb(r + k - 1, k) * c**k
                    acc[r + k].append(src[r].scale(coef, k))
            return TruncSeries(ctx, DOWN, [_sum(a, ctx) for a in acc])
        N = self.order - H
        if N < 0:
            raise UsageError(f"up series of order {self.order} is too short to shift at H={H}")
        out = []
        for t in range(N + 1):
            terms = [src[t + k].scale(comb(t + k, k) * c**k, k) for k in range(0, H + 1) if src[t + k]]
            out.append(_sum(terms, ctx))
        return TruncSeries(ctx, UP, out)

    def __eq__(self, other):
        return (
            isinstance(other, TruncSeries)
            and self.direction == other.direction
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.direction, self.coeffs))

    def __repr__(self):
        return f"TruncSeries({serialize_series(self)!r})"


def _require_h_divisible(elems: Sequence[Element]):
    for e in elems:
        for (k, w), c in e.terms.items():
            if k < 1:
                raise SingularityError(f"Neumann inversion needs 1 + O(h); found h-free term {c} {w}")


def serialize_series(s: TruncSeries) -> str:
    body = "; ".join(f"c{k}={serialize(c)}" for k, c in enumerate(s.coeffs))
    return f"dir={s.direction}; N={s.order}; {body}"


def parse_series(text: str, ctx: AlgebraContext) -> TruncSeries:
    from .algebra import parse

    # ';' also occurs inside generators, so split only before a field name
    fields = [f.strip() for f in re.split(r";\s*(?=(?:dir|N|c\d+)\s*=)", text.strip())]
    head = dict(f.split("=", 1) for f in fields[:2])
    direction, order = head["dir"].strip(), int(head["N"])
    coeffs = []
    for k, f in enumerate(fields[2:]):
        key, val = f.split("=", 1)
        if key.strip() != f"c{k}":
            raise UsageError(f"expected c{k}, got {key!r}")
        coeffs.append(parse(val, ctx))
    if len(coeffs) != order + 1:
        raise UsageError(f"series declares N={order} but has {len(coeffs)} coefficients")
    return TruncSeries(ctx, direction, coeffs)


def generator_series(ctx: AlgebraContext, sign: str, i: int, j: int, order: int | None = None) -> TruncSeries:
    """t_ij^-(u) = delta_ij + h sum t_ij^(r) u^-r, or
    t_ij^+(u) = delta_ij - h sum t_ij^(-r) u^(r-1)."""
    order = ctx.N if order is None else order
    delta = ctx.one() if i == j else ctx.zero()
    if sign == "-":
        coeffs = [delta] + [ctx.gen("-", r, i, j).hmul(1) for r in range(1, order + 1)]
        return TruncSeries(ctx, DOWN, coeffs)
    coeffs = [delta - ctx.gen("+", 1, i, j).hmul(1)]
    coeffs += [-ctx.gen("+", r + 1, i, j).hmul(1) for r in range(1, order + 1)]
    return TruncSeries(ctx, UP, coeffs)


def direction_of(sign: str) -> str:
    return DOWN if sign == "-" else UP


# ---------------------------------------------------------------- matrices


class SeriesMatrix:
    """Square matrix of series.  Entries carry no parity prefactor: for
    even matrices the prefactor cancels in products, so the usual row-by-column
    rule applies."""

    __slots__ = ("ctx", "direction", "rows")

    def __init__(self, ctx: AlgebraContext, direction: str, rows: Sequence[Sequence[TruncSeries]]):
        self.ctx = ctx
        self.direction = direction
        self.rows = tuple(tuple(r) for r in rows)
        d = len(self.rows)
        if any(len(r) != d for r in self.rows):
            raise UsageError("SeriesMatrix must be square")

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def order(self) -> int:
        return min(e.order for r in self.rows for e in r)

    def __getitem__(self, ij) -> TruncSeries:
        i, j = ij
        return self.rows[i - 1][j - 1]

    @classmethod
    def identity(cls, ctx, direction, size, order) -> "SeriesMatrix":
        one = TruncSeries.constant(ctx, direction, 1, order)
        zero = TruncSeries.constant(ctx, direction, 0, order)
        return cls(ctx, direction, [[one if i == j else zero for j in range(size)] for i in range(size)])

    def __add__(self, other):
        return SeriesMatrix(self.ctx, self.direction, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return SeriesMatrix(self.ctx, self.direction, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def map(self, fn: Callable[[TruncSeries], TruncSeries]) -> "SeriesMatrix":
        return SeriesMatrix(self.ctx, self.direction, [[fn(e) for e in r] for r in self.rows])

    def truncate(self, order: int) -> "SeriesMatrix":
        return self.map(lambda e: e.truncate(order))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SeriesMatrix":
        """1-based row and column selections."""
        return SeriesMatrix(self.ctx, self.direction, [[self[i, j] for j in cols] for i in rows])

    def matmul(self, other: "SeriesMatrix", ring=FREE) -> "SeriesMatrix":
        d = self.size
        if other.size != d:
            raise UsageError("matrix size mismatch")
        order = min(self.order, other.order)
        out = []
        for i in range(d):
            row = []
            for j in range(d):
                row.append(_series_dot([(self.rows[i][k], other.rows[k][j]) for k in range(d)], ring, order))
            out.append(row)
        return SeriesMatrix(self.ctx, self.direction, out)

    def inverse(self, ring=FREE) -> "SeriesMatrix":
        """Neumann inverse sum_{j<=H} K^j of M = 1 - K."""
        order = self.order
        one = SeriesMatrix.identity(self.ctx, self.direction, self.size, order)
        K = one - self
        for r in K.rows:
            for e in r:
                _require_h_divisible(e.coeffs)
        inv = one
        for _ in range(self.ctx.H):
            inv = one + K.matmul(inv, ring)
        return inv


def _series_dot(pairs, ring, order: int) -> TruncSeries:
    """sum_k a_k * b_k for series pairs, one ring call per output coefficient."""
    a0 = pairs[0][0]
    ctx, direction = a0.ctx, a0.direction
    out = []
    for t in range(order + 1):
        prods = []
        for a, b in pairs:
            ac, bc = a.coeffs, b.coeffs
            for p in range(t + 1):
                if ac[p] and bc[t - p]:
                    prods.append((ac[p], bc[t - p]))
        out.append(ring.dot(prods) if prods else ctx.zero())
    return TruncSeries(ctx, direction, out)


def series_dot(pairs, ring=FREE) -> TruncSeries:
    order = min(min(a.order, b.order) for a, b in pairs)
    return _series_dot(pairs, ring, order)


def generator_matrix(ctx: AlgebraContext, sign: str, order: int | None = None) -> SeriesMatrix:
    d = ctx.size
    rows = [[generator_series(ctx, sign, i, j, order) for j in range(1, d + 1)] for i in range(1, d + 1)]
    return SeriesMatrix(ctx, direction_of(sign), rows)


def quasidet(A: SeriesMatrix, i: int, j: int, ring=FREE, minor_inverse: SeriesMatrix | None = None) -> TruncSeries:
    """|A|_ij = a_ij - r_i^j (A^ij)^-1 c_j^i (1-based), order of factors kept."""
    d = A.size
    if d == 1:
        return A[i, j]
    rows = [r for r in range(1, d + 1) if r != i]
    cols = [c for c in range(1, d + 1) if c != j]
    inv = minor_inverse if minor_inverse is not None else A.submatrix(rows, cols).inverse(ring)
    # r_i^j * inv is a row vector over cols-index of inv (indexed by rows)
    row = [A[i, c] for c in cols]
    col = [A[r, j] for r in rows]
    k = len(rows)
    ri = [series_dot([(row[a], inv.rows[a][b]) for a in range(k)], ring) for b in range(k)]
    correction = series_dot([(ri[b], col[b]) for b in range(k)], ring)
    return A[i, j] - correction


# ---------------------------------------------------------------- two legs


class TwoLegOperator:
    """sum of e_ij (x) e_kl (x) a, stored as {(i, j, k, l): Element} (1-based).

    Products follow the Koszul rule
    (x (x) y (x) a)(z (x) w (x) b) = (-1)^{|y||z| + |a|(|z|+|w|)} xz (x) yw (x) ab.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: AlgebraContext, terms: dict):
        self.ctx = ctx
        self.terms = {k: v for k, v in terms.items() if v}

    @classmethod
    def identity(cls, ctx) -> "TwoLegOperator":
        d = ctx.size
        one = ctx.one()
        return cls(ctx, {(i, i, k, k): one for i in range(1, d + 1) for k in range(1, d + 1)})

    @classmethod
    def permutation(cls, ctx) -> "TwoLegOperator":
        """P = sum e_ij (x) e_ji (-1)^{parity(j)}."""
        d = ctx.size
        return cls(
            ctx,
            {(i, j, j, i): ctx.scalar(-1 if ctx.index_parity(j) else 1) for i in range(1, d + 1) for j in range(1, d + 1)},
        )

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return TwoLegOperator(self.ctx, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, q, hpow: int = 0) -> "TwoLegOperator":
        return TwoLegOperator(self.ctx, {k: v.scale(q, hpow) for k, v in self.terms.items()})

    def __getitem__(self, key) -> Element:
        return self.terms.get(key, self.ctx.zero())

    def __eq__(self, other):
        return isinstance(other, TwoLegOperator) and self.terms == other.terms

    def mul(self, other: "TwoLegOperator", ring=FREE) -> "TwoLegOperator":
        ctx = self.ctx
        par = ctx.index_parity
        by_first = {}
        for (p, q, r, s), b in other.terms.items():
            by_first.setdefault((p, r), []).append((q, s, b))
        acc: dict = {}
        for (i, j, k, l), a in self.terms.items():
            right = by_first.get((j, l))
            if not right:
                continue
            kl = par(k) ^ par(l)
            parts = [(pa, part) for pa, part in enumerate(a.parity_parts()) if part]
            for q, s, b in right:
                jq = par(j) ^ par(q)
                ls = par(l) ^ par(s)
                for pa, part in parts:
                    sign = (kl * jq + pa * (jq ^ ls)) & 1
                    acc.setdefault((i, q, k, s), []).append((part.scale(-1) if sign else part, b))
        return TwoLegOperator(ctx, {key: ring.dot(pairs) for key, pairs in acc.items()})


def two_leg_mul(X: TwoLegOperator, Y: TwoLegOperator, ring=FREE) -> TwoLegOperator:
    return X.mul(Y, ring)


def leg_apply(ctx: AlgebraContext, entries: dict, leg: int) -> TwoLegOperator:
    """Embed sum_ij (-1)^{ij + j} e_ij (x) entries[i, j] into tensor leg 1 or 2,
    with the identity on the other leg."""
    d = ctx.size
    par = ctx.index_parity
    terms = {}
    for (i, j), a in entries.items():
        if not a:
            continue
        pre = (par(i) * par(j) + par(j)) & 1
        a = a.scale(-1) if pre else a
        for k in range(1, d + 1):
            terms[(i, j, k, k) if leg == 1 else (k, k, i, j)] = a
    return TwoLegOperator(ctx, terms)


def homogeneous_parity(a: Element) -> int:
    p = a.parity()
    if p is None:
        raise UsageError("element is not parity-homogeneous")
    return p


__all__ = [
    "DOWN",
    "UP",
    "FREE",
    "SingularityError",
    "TruncSeries",
    "SeriesMatrix",
    "TwoLegOperator",
    "generator_series",
    "generator_matrix",
    "quasidet",
    "series_dot",
    "two_leg_mul",
    "leg_apply",
    "serialize_series",
    "parse_series",
    "direction_of",
    "word_parity",
    "Q",
]
