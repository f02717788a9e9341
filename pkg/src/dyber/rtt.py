"""Straightening rules read off the RTT relations, and PBW normal forms.

Generator matrices are expanded as T^-(u) = sum_r T[r] u^-r with T[0] = 1,
T[r] = h t^(r), and T^+(u) = sum_s S[s] u^s with S[0] = 1 - h t^(-1),
S[s] = -h t^(-s-1).  Multiplying each RTT relation by (u - v) gives, at each
coefficient, an identity between two-leg operators:

    --  C(a, b) = C(a-1, b+1) + h(P T1[a-1] T2[b] - T2[b] T1[a-1] P)
    -+  C(a, b) = C(a-1, b-1) + h(P T1[a-1] S2[b] - S2[b] T1[a-1] P)
    ++  C(a, b) = C(a-1, b+1) - h(P S1[a] S2[b+1] - S2[b+1] S1[a] P)

where C(a, b) is the operator commutator of the two leg-embedded
coefficients.  The (i, j, k, l) entry of ``[X1, Y2] - C`` vanishes in the
algebra and contains the out-of-order word x*y with a unit multiple of h^2;
solving for it gives the rewrite rule.  Rule right-hand sides have h-degree
at most one, so they are exact at any truncation.
"""
from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import (
    AlgebraContext,
    Element,
    UsageError,
    decode,
    encode,
    gen_level,
    gen_parity,
    gen_sign,
    gen_str,
    parse,
    serialize,
    supercomm,
)
from ._kernels_select import IMPLEMENTATION, Normalizer
from .coeffs import ONE, Q, ZERO
from .series import FREE, TwoLegOperator, leg_apply

ENGINE_VERSION = "dyber-1.0"

MM, PP, MP = "--", "++", "mixed"


class CapError(RuntimeError):
    """A rule was requested for generators above the configured level cap."""

    def __init__(self, level: int, cap: int):
        super().__init__(f"generator level {level} exceeds the level cap {cap}; rerun with --cap {level} or higher")
        self.needed = level
        self.cap = cap


class StaleCacheError(RuntimeError):
    pass


class InternalError(AssertionError):
    pass


def default_cap(N: int, H: int) -> int:
    return 2 * (N + H) + 2


@dataclass(frozen=True)
class RewriteRule:
    lhs: tuple[int, int]
    rhs: Element
    family: str
    depth: int

    def __str__(self):
        x, y = self.lhs
        return f"({gen_str(x)},{gen_str(y)}) -> {serialize(self.rhs)}"


class RuleDeriver:
    """Two-leg expansions of the three relation families for one gl(m|n)."""

    def __init__(self, m: int, n: int):
        # h-degree of every relation is at most 3 before dividing by h^2
        self.ctx = AlgebraContext(m, n, 3, 0)
        self.P = TwoLegOperator.permutation(self.ctx)
        self._mats: dict = {}
        self._ops: dict = {}
        self._rhs: dict = {}
        self._tel: dict = {}

    def coefficient_entries(self, sign: str, r: int) -> dict:
        """One-leg entries of T[r] (sign '-') or S[r] (sign '+')."""
        key = (sign, r)
        hit = self._mats.get(key)
        if hit is not None:
            return hit
        ctx = self.ctx
        d = ctx.size
        ent = {}
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                if sign == "-":
                    e = ctx.one() if (r == 0 and i == j) else (ctx.gen("-", r, i, j).hmul(1) if r else ctx.zero())
                else:
                    e = -ctx.gen("+", r + 1, i, j).hmul(1)
                    if r == 0 and i == j:
                        e = e + 1
                ent[(i, j)] = e
        self._mats[key] = ent
        return ent

    def leg(self, sign: str, r: int, leg: int) -> TwoLegOperator:
        key = (sign, r, leg)
        hit = self._ops.get(key)
        if hit is None:
            hit = leg_apply(self.ctx, self.coefficient_entries(sign, r), leg)
            self._ops[key] = hit
        return hit

    def rhs(self, family: str, r: int, s: int) -> TwoLegOperator:
        """h (P X1[r] Y2[s] - Y2[s] X1[r] P) for the family's two matrices."""
        key = (family, r, s)
        hit = self._rhs.get(key)
        if hit is not None:
            return hit
        s1, s2 = {MM: ("-", "-"), MP: ("-", "+"), PP: ("+", "+")}[family]
        X1 = self.leg(s1, r, 1)
        Y2 = self.leg(s2, s, 2)
        XY = X1.mul(Y2)
        YX = Y2.mul(X1)
        out = self.P.mul(XY) - YX.mul(self.P)
        out = out.scale(1, 1)
        self._rhs[key] = out
        return out

    def telescoped(self, family: str, a: int, b: int) -> tuple[TwoLegOperator, int]:
        """Right-hand side C(a, b) of the commutator identity and its depth."""
        key = (family, a, b)
        hit = self._tel.get(key)
        if hit is not None:
            return hit
        zero = TwoLegOperator(self.ctx, {})
        if family == MM:
            res = (zero, 0) if a == 0 else None
            if res is None:
                prev, dep = self.telescoped(MM, a - 1, b + 1)
                res = (prev + self.rhs(MM, a - 1, b), dep + 1)
        elif family == MP:
            res = (zero, 0) if (a == 0 or b == -1) else None
            if res is None:
                prev, dep = self.telescoped(MP, a - 1, b - 1)
                res = (prev + self.rhs(MP, a - 1, b), dep + 1)
        else:
            res = (zero, 0) if a == -1 else None
            if res is None:
                prev, dep = self.telescoped(PP, a - 1, b + 1)
                res = (prev - self.rhs(PP, a, b + 1), dep + 1)
        self._tel[key] = res
        return res

    def commutator(self, family: str, a: int, b: int) -> TwoLegOperator:
        """The operator commutator X1[a] Y2[b] - Y2[b] X1[a] computed directly."""
        key = ("comm", family, a, b)
        hit = self._ops.get(key)
        if hit is None:
            s1, s2 = {MM: ("-", "-"), MP: ("-", "+"), PP: ("+", "+")}[family]
            X1 = self.leg(s1, a, 1)
            Y2 = self.leg(s2, b, 2)
            hit = X1.mul(Y2) - Y2.mul(X1)
            self._ops[key] = hit
        return hit

    def identity_entry(self, family: str, a: int, b: int, ijkl) -> tuple[Element, int]:
        """Entry of [X1[a], Y2[b]] - C(a, b): an element equal to zero in DY."""
        tel, depth = self.telescoped(family, a, b)
        return self.commutator(family, a, b)[ijkl] - tel[ijkl], depth


def _solve(identity: Element, x: int, y: int, m: int) -> tuple:
    """Solve ``identity == 0`` for the word x*y; returns raw rhs terms."""
    target = (2, (x, y))
    c = identity.terms.get(target)
    if not c:
        raise InternalError(f"identity for ({gen_str(x)}, {gen_str(y)}) does not contain the word")
    inv = -ONE / c
    out = {}
    for (k, w), coef in identity.terms.items():
        if (k, w) == target:
            continue
        if k < 2:
            raise InternalError(f"relation term below h^2: {coef} h^{k} {w}")
        out[(k - 2, w)] = coef * inv
    if x != y:
        sgn = -1 if (gen_parity(x, m) and gen_parity(y, m)) else 1
        if out.get((0, (y, x))) != sgn:
            raise InternalError(f"swap coefficient for ({gen_str(x)}, {gen_str(y)}) is not the Koszul sign")
    return tuple(sorted((k, w, coef) for (k, w), coef in out.items()))


class RuleTable:
    """Lazily derived, memoized rewrite rules for one gl(m|n).

    Any element whose context has the same (m, n) can be normalized; its
    context's H sets the truncation.
    """

    def __init__(self, ctx: AlgebraContext, cap: int | None = None):
        self.ctx = ctx
        self.cap = default_cap(ctx.N, ctx.H) if cap is None else cap
        if self.cap < 1:
            raise UsageError("level cap must be positive")
        self.m, self.n = ctx.m, ctx.n
        self.rule_ctx = AlgebraContext(ctx.m, ctx.n, max(ctx.H, 1), ctx.N)
        self._deriver = None
        self._rules: dict = {}
        self._meta: dict = {}
        self._lock = threading.RLock()
        self._norm = Normalizer(ctx.m, self._rule_terms)

    name = "normal"

    @property
    def deriver(self) -> RuleDeriver:
        if self._deriver is None:
            self._deriver = RuleDeriver(self.m, self.n)
        return self._deriver

    # rules

    def _check_pair(self, x: int, y: int):
        if x < y or (x == y and not gen_parity(x, self.m)):
            raise UsageError(f"pair ({gen_str(x)}, {gen_str(y)}) is already in normal order")
        d = self.m + self.n
        for g in (x, y):
            _, lv, i, j = decode(g)
            if not (1 <= i <= d and 1 <= j <= d):
                raise UsageError(f"{gen_str(g)} does not belong to gl({self.m}|{self.n})")
            if lv > self.cap:
                raise CapError(lv, self.cap)

    def _rule_terms(self, x: int, y: int) -> tuple:
        hit = self._rules.get((x, y))
        if hit is not None:
            return hit
        with self._lock:
            hit = self._rules.get((x, y))
            if hit is not None:
                return hit
            self._check_pair(x, y)
            sx, ax, i, j = decode(x)
            sy, ay, k, l = decode(y)
            der = self.deriver
            if sx == "-" and sy == "-":
                family, a, b = MM, ax, ay
            elif sx == "-" and sy == "+":
                family, a, b = MP, ax, ay - 1
            elif sx == "+" and sy == "+":
                family, a, b = PP, ax - 1, ay - 1
            else:
                raise InternalError("plus-minus pairs are always ordered")
            ident, depth = der.identity_entry(family, a, b, (i, j, k, l))
            terms = _solve(ident, x, y, self.m)
            self._rules[(x, y)] = terms
            self._meta[(x, y)] = (family, depth)
            return terms

    def rule_for(self, x, y) -> RewriteRule:
        """The rewrite rule for the out-of-order pair ``x*y`` (codes or generator elements)."""
        x, y = _code(x), _code(y)
        terms = self._rule_terms(x, y)
        family, depth = self._meta[(x, y)]
        rhs = Element(self.rule_ctx, {(k, w): c for k, w, c in terms})
        return RewriteRule((x, y), rhs, family, depth)

    def known_rules(self) -> list[tuple[int, int]]:
        return sorted(self._rules)

    # normal forms

    def _budget(self, a: Element) -> int:
        if not a.ctx.same_algebra(self.ctx):
            raise UsageError(f"element of gl({a.ctx.m}|{a.ctx.n}) given to gl({self.m}|{self.n}) rule table")
        return a.ctx.H

    def normalize(self, a: Element) -> Element:
        if a.is_normal:
            return a
        b = self._budget(a)
        return Element(a.ctx, self._norm.normalize_terms(a.terms, b), normal=True)

    reduce = normalize

    def mul(self, a: Element, b: Element) -> Element:
        if a.ctx != b.ctx:
            raise UsageError("context mismatch")
        a, b = self.normalize(a), self.normalize(b)
        return Element(a.ctx, self._norm.mul_normal(a.terms, b.terms, self._budget(a)), normal=True)

    def dot(self, pairs) -> Element:
        """sum a_i * b_i reduced to normal form, accumulated in one map."""
        acc: dict = {}
        ctx = None
        for a, b in pairs:
            a, b = self.normalize(a), self.normalize(b)
            ctx = a.ctx
            part = self._norm.mul_normal(a.terms, b.terms, self._budget(a))
            for key, c in part.items():
                v = acc.get(key, ZERO) + c
                if v:
                    acc[key] = v
                else:
                    del acc[key]
        return Element(ctx, acc, normal=True)

    def supercomm(self, a: Element, b: Element) -> Element:
        return self.normalize(supercomm(a, b))

    def is_zero(self, a: Element) -> bool:
        return not self.normalize(a).terms

    def memo_size(self) -> int:
        return len(self._norm.memo)


_TABLES: dict = {}
_TABLES_LOCK = threading.Lock()


def shared_table(m: int, n: int, cap: int, H: int = 1, N: int = 1) -> RuleTable:
    """Process-wide table per (m, n, cap); rules do not depend on H or N."""
    key = (m, n, cap)
    with _TABLES_LOCK:
        t = _TABLES.get(key)
        if t is None:
            t = RuleTable(AlgebraContext(m, n, H, N), cap)
            _TABLES[key] = t
        return t


def register_table(table: RuleTable) -> RuleTable:
    """Make ``table`` (e.g. one loaded from a cache) the shared table for its
    (m, n, cap)."""
    with _TABLES_LOCK:
        _TABLES[(table.m, table.n, table.cap)] = table
    return table


def table_for(ctx: AlgebraContext, like: RuleTable | None = None) -> RuleTable:
    cap = like.cap if like is not None else default_cap(ctx.N, ctx.H)
    if like is not None and like.ctx.same_algebra(ctx):
        return like
    return shared_table(ctx.m, ctx.n, cap, ctx.H, ctx.N)


def _code(g) -> int:
    if isinstance(g, int):
        return g
    (k, w), = g.terms.keys()
    if k or len(w) != 1:
        raise UsageError("expected a single generator")
    return w[0]


def normalize(a: Element, table: RuleTable) -> Element:
    return table.normalize(a)


def is_zero(a: Element, table: RuleTable) -> bool:
    return table.is_zero(a)


def rule_for(table: RuleTable, x, y) -> RewriteRule:
    return table.rule_for(x, y)


# ---------------------------------------------------------------- expansions


def two_leg_expand(table: RuleTable, family: str, r: int, s: int) -> dict:
    """All entries (i, j, k, l) -> (lhs, rhs) of the commutator identity at
    coefficient indices (r, s).  ``lhs`` is the operator commutator of the two
    leg-embedded coefficients, ``rhs`` its telescoped form; both live in the
    derivation context (h-truncation 3)."""
    der = table.deriver
    if family not in (MM, MP, PP):
        raise UsageError(f"unknown family {family!r}")
    lv = max(r, s) + 1
    if lv > table.cap + 1:
        raise CapError(lv, table.cap)
    lhs = der.commutator(family, r, s)
    rhs, _ = der.telescoped(family, r, s)
    keys = sorted(set(lhs.terms) | set(rhs.terms))
    return {k: (lhs[k], rhs[k]) for k in keys}


# ---------------------------------------------------------------- strategies


def naive_normalize(a: Element, table: RuleTable, strategy: str = "leftmost") -> Element:
    """Rewrite one adjacent out-of-order pair at a time; ``leftmost`` or
    ``rightmost`` picks which pair.  Slow; used to probe confluence."""
    m = table.m
    H = table._budget(a)
    pending = dict(a.terms)
    done: dict = {}
    while pending:
        nxt: dict = {}
        for (k, w), c in pending.items():
            pos = None
            rng = range(len(w) - 1) if strategy == "leftmost" else range(len(w) - 2, -1, -1)
            for p in rng:
                x, y = w[p], w[p + 1]
                if x > y or (x == y and gen_parity(x, m)):
                    pos = p
                    break
            if pos is None:
                _acc(done, (k, w), c)
                continue
            for k2, w2, c2 in table._rule_terms(w[pos], w[pos + 1]):
                if k + k2 > H:
                    continue
                _acc(nxt, (k + k2, w[:pos] + w2 + w[pos + 2:]), c * c2)
        pending = nxt
    return Element(a.ctx, done, normal=True)


def _acc(d: dict, key, c):
    v = d.get(key, ZERO) + c
    if v:
        d[key] = v
    else:
        d.pop(key, None)


def random_word(ctx: AlgebraContext, rng: random.Random, max_len: int = 6, max_level: int = 3) -> Element:
    d = ctx.size
    length = rng.randint(1, max_len)
    word = tuple(
        encode(rng.choice("+-"), rng.randint(1, max_level), rng.randint(1, d), rng.randint(1, d)) for _ in range(length)
    )
    return Element(ctx, {(0, word): ONE})


def _probe_table(table: RuleTable, ctx: AlgebraContext, max_len: int, max_level: int) -> RuleTable:
    # linear corrections add levels, so a word can reach the sum of its levels
    need = max_len * max_level
    if table.cap < need:
        table = shared_table(table.m, table.n, need, ctx.H, ctx.N)
    return table


def confluence_checks(table: RuleTable, ctx: AlgebraContext, seed: int, trials: int):
    """One (params, thunk) per random word; each thunk normalizes the word
    with leftmost and rightmost single-step rewriting and with the production
    normalizer and returns (agree, difference)."""
    if trials < 1:
        raise UsageError("trials must be >= 1")
    rng = random.Random(seed)
    max_len, max_level = 6, 3
    table = _probe_table(table, ctx, max_len, max_level)
    out = []
    for t in range(trials):
        w = random_word(ctx, rng, max_len, max_level)

        def run(w=w):
            left = naive_normalize(w, table, "leftmost")
            right = naive_normalize(w, table, "rightmost")
            prod = table.normalize(w)
            if left == right == prod:
                return True, None
            return False, (left - right if left != right else left - prod)

        out.append(({"trial": t, "word": serialize(w)}, run))
    return out


def confluence_probe(table: RuleTable, ctx: AlgebraContext, seed: int, trials: int) -> list[dict]:
    """Run :func:`confluence_checks` and return one record per trial."""
    records = []
    for params, run in confluence_checks(table, ctx, seed, trials):
        ok, diff = run()
        records.append(
            {
                "label": "confluence",
                "params": params,
                "passed": ok,
                "counterexample": None if ok else serialize(diff),
            }
        )
    return records


# ---------------------------------------------------------------- oracle (2.4)/(2.5)


def inverse_relation_checks(table: RuleTable, ctx: AlgebraContext):
    """Yield (label, params, thunk) checks of the displayed relations between
    entries of T^{±}(u) and of T^{±}(v)^{-1}; each thunk returns the
    normalized difference of the two sides at one coefficient."""
    from .series import generator_matrix

    d = ctx.size
    par = ctx.index_parity
    N = ctx.N
    mats = {s: generator_matrix(ctx, s, N) for s in "-+"}
    invs = {s: mats[s].inverse(table) for s in "-+"}

    def coeff(series, p):
        return series.coeffs[p] if 0 <= p <= series.order else ctx.zero()

    def shifted(series, p, up):
        # coefficient of the relevant power in (variable) * series
        return coeff(series, p - 1) if up else coeff(series, p + 1)

    for s_t in "-+":
        for s_i in "-+":
            label = "rel_comm1" if s_t == s_i else "rel_comm2"
            t_up, i_up = s_t == "+", s_i == "+"
            T, Ti = mats[s_t], invs[s_i]
            # coefficient indices p (for u) and q (for v); the variable-times
            # series lookups stay within the computed order
            prange = range(0, N) if not t_up else range(0, N + 1)
            qrange = range(0, N) if not i_up else range(0, N + 1)
            for i in range(1, d + 1):
                for j in range(1, d + 1):
                    for k in range(1, d + 1):
                        for l in range(1, d + 1):
                            sign = (par(i) * par(j) + par(i) * par(k) + par(j) * par(k)) & 1
                            for p in prange:
                                for q in qrange:
                                    yield (
                                        label,
                                        {"sign_t": s_t, "sign_inv": s_i, "ijkl": [i, j, k, l], "u": p, "v": q},
                                        _rel_thunk(table, ctx, T, Ti, i, j, k, l, p, q, t_up, i_up, sign, coeff, shifted),
                                    )


def _rel_thunk(table, ctx, T, Ti, i, j, k, l, p, q, t_up, i_up, sign, coeff, shifted):
    def run():
        d = ctx.size
        tij, tkl = T[i, j], Ti[k, l]
        # (u - v)[t(u), t'(v)] at u^{±p} v^{±q}
        lhs = table.supercomm(shifted(tij, p, t_up), coeff(tkl, q)) - table.supercomm(coeff(tij, p), shifted(tkl, q, i_up))
        rhs = ctx.zero()
        if k == j:
            rhs = rhs + table.dot([(coeff(T[i, a], p), coeff(Ti[a, l], q)) for a in range(1, d + 1)])
        if i == l:
            rhs = rhs - table.dot([(coeff(Ti[k, a], q), coeff(T[a, j], p)) for a in range(1, d + 1)])
        rhs = rhs.hmul(1)
        if sign:
            rhs = -rhs
        return table.normalize(lhs - rhs)

    return run


# ---------------------------------------------------------------- cache


def cache_path(cache_dir, m: int, n: int) -> Path:
    return Path(cache_dir) / f"rules_gl{m}_{n}.txt"


def cache_rules(table: RuleTable, cache_dir, H: int) -> Path:
    """Write every rule derived so far; header records (m, n, H, L, version)."""
    path = cache_path(cache_dir, table.m, table.n)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# engine={ENGINE_VERSION} m={table.m} n={table.n} H={H} L={table.cap}"]
    for x, y in table.known_rules():
        family, depth = table._meta[(x, y)]
        rhs = Element(table.rule_ctx, {(k, w): c for k, w, c in table._rules[(x, y)]})
        lines.append(f"({gen_str(x)},{gen_str(y)}) -> {serialize(rhs)}  # {family} {depth}")
    tmp = path.with_suffix(".tmp")
    tmp.write_text("\n".join(lines) + "\n", encoding="utf-8")
    tmp.replace(path)
    return path


def load_rules(path, ctx: AlgebraContext, cap: int) -> RuleTable:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"rule cache {path} not found")
    lines = path.read_text(encoding="utf-8").splitlines()
    expected = f"# engine={ENGINE_VERSION} m={ctx.m} n={ctx.n} H={ctx.H} L={cap}"
    if not lines or lines[0].strip() != expected:
        raise StaleCacheError(f"stale rule cache {path}: header {lines[0] if lines else ''!r}, expected {expected!r}; delete it to regenerate")
    table = RuleTable(ctx, cap)
    for line in lines[1:]:
        if not line.strip():
            continue
        body, _, meta = line.partition("  # ")
        lhs, _, rhs = body.partition(" -> ")
        a, b = lhs.strip()[1:-1].split("],")
        x = _code(parse(a + "]", table.rule_ctx))
        y = _code(parse(b, table.rule_ctx))
        elem = parse(rhs, table.rule_ctx)
        family, depth = meta.split()
        table._rules[(x, y)] = tuple(sorted((k, w, c) for (k, w), c in elem.terms.items()))
        table._meta[(x, y)] = (family, int(depth))
    return table


__all__ = [
    "CapError",
    "StaleCacheError",
    "RewriteRule",
    "RuleTable",
    "RuleDeriver",
    "normalize",
    "is_zero",
    "rule_for",
    "two_leg_expand",
    "naive_normalize",
    "confluence_probe",
    "confluence_checks",
    "register_table",
    "default_cap",
    "inverse_relation_checks",
    "cache_rules",
    "load_rules",
    "shared_table",
    "table_for",
    "ENGINE_VERSION",
    "IMPLEMENTATION",
    "Q",
    "FREE",
    "gen_level",
    "gen_sign",
]
