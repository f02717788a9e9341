"""Algebra maps between double Yangians given by generator substitution.

Kinds:
  rho    gl(m|n) -> gl(n|m),   t_ij(u) -> t_{i'j'}(-u),  i' = m+n+1-i
  omega  gl(m|n) -> gl(m|n),   T(u)    -> T(-u)^-1
  iota   gl(m|n) -> gl(m+k|n), t_ij    -> t_{i+k, j+k}
  zeta   = rho o omega
  psi    = omega o iota o omega
  subst  an explicit image table (used to substitute free symbols)

Images are computed lazily per generator, stored normalized in the target.
"""
from __future__ import annotations

import threading
from typing import Callable

from .algebra import AlgebraContext, Element, UsageError, decode, encode, gen_str
from .checks import Check, Outcome, series_outcome
from .coeffs import ONE, ZERO
from .series import TruncSeries, generator_matrix, generator_series, quasidet

KINDS = ("rho", "omega", "iota", "zeta", "psi", "subst", "identity")


class Morphism:
    """A homomorphism determined by generator images.

    ``source`` and ``target`` are contexts with the same H; ``target_table``
    reduces products in the target.
    """

    def __init__(self, kind: str, source: AlgebraContext, target: AlgebraContext, target_table, image_fn: Callable[[int], Element], params=None):
        if kind not in KINDS:
            raise UsageError(f"unknown morphism kind {kind!r}")
        if source.H != target.H:
            raise UsageError("source and target must share the h-truncation order")
        self.kind = kind
        self.source = source
        self.target = target
        self.table = target_table
        self.params = dict(params or {})
        self._image_fn = image_fn
        self._images: dict[int, Element] = {}
        self._lock = threading.Lock()

    def image(self, code: int) -> Element:
        hit = self._images.get(code)
        if hit is None:
            _, lv, i, j = decode(code)
            d = self.source.size
            if not (1 <= i <= d and 1 <= j <= d):
                raise UsageError(f"{gen_str(code)} is not a generator of gl({self.source.m}|{self.source.n})")
            with self._lock:
                hit = self._images.get(code)
                if hit is None:
                    hit = self.table.normalize(self._image_fn(code))
                    self._images[code] = hit
        return hit

    def image_table(self) -> dict[int, Element]:
        return dict(sorted(self._images.items()))

    def apply(self, a: Element) -> Element:
        if not a.ctx.same_algebra(self.source):
            raise UsageError(f"element of gl({a.ctx.m}|{a.ctx.n}) given to a map from gl({self.source.m}|{self.source.n})")
        if a.ctx.H > self.target.H:
            raise UsageError(f"images are exact only to h^{self.target.H}; input has H={a.ctx.H}")
        tctx = self.target if a.ctx.H == self.target.H else self.target.with_orders(H=a.ctx.H)
        acc: dict = {}
        tb = self.table
        for (k, w), c in a.terms.items():
            if k > tctx.H:
                continue
            if not w:
                _acc(acc, {(0, ()): ONE}, c, k, tctx.H)
                continue
            prod = self._recast(self.image(w[0]), tctx)
            for g in w[1:]:
                prod = tb.mul(prod, self._recast(self.image(g), tctx))
                if not prod.terms:
                    break
            _acc(acc, prod.terms, c, k, tctx.H)
        return Element(tctx, acc, normal=True)

    @staticmethod
    def _recast(e: Element, ctx: AlgebraContext) -> Element:
        return e if e.ctx == ctx else e.recast(ctx)

    def apply_series(self, s: TruncSeries) -> TruncSeries:
        return TruncSeries(self.target if s.ctx.H == self.target.H else self.target.with_orders(H=s.ctx.H), s.direction, [self.apply(c) for c in s.coeffs])

    __call__ = apply

    def __repr__(self):
        return f"Morphism({self.kind}, gl({self.source.m}|{self.source.n}) -> gl({self.target.m}|{self.target.n}))"


def _acc(acc: dict, terms, c, k, H):
    for (p, w), v in terms.items():
        if p + k > H:
            continue
        key = (p + k, w)
        s = acc.get(key, ZERO) + c * v
        if s:
            acc[key] = s
        else:
            acc.pop(key, None)


# ---------------------------------------------------------------- kinds


def _rho_image(source: AlgebraContext, target: AlgebraContext):
    d = source.size

    def fn(code):
        sign, r, i, j = decode(code)
        # minus: coefficient of u^-r picks up (-1)^r; plus: u^(r-1) gives (-1)^(r-1)
        s = (-1) ** r if sign == "-" else (-1) ** (r - 1)
        return target.gen(sign, r, d + 1 - i, d + 1 - j).scale(s)

    return fn


class _OmegaImages:
    """Coefficients of T(-u)^-1, computed one h-order up and grown on demand."""

    def __init__(self, ctx: AlgebraContext, table):
        self.ctx = ctx
        self.table = table
        self.hi = ctx.with_orders(H=ctx.H + 1)
        self._inv: dict[str, object] = {}
        self._order: dict[str, int] = {}
        self._lock = threading.Lock()

    def inverse(self, sign: str, order: int):
        with self._lock:
            if self._order.get(sign, -1) < order:
                order = max(order, 2 * self._order.get(sign, 0), self.ctx.N)
                T = generator_matrix(self.hi, sign, order)
                self._inv[sign] = T.inverse(self.table)
                self._order[sign] = order
            return self._inv[sign]

    def __call__(self, code):
        sign, r, i, j = decode(code)
        if sign == "-":
            c = self.inverse("-", r)[i, j].coeffs[r]
            img = c.hdiv(1).scale((-1) ** r) if c.terms else c
        else:
            c = self.inverse("+", r - 1)[i, j].coeffs[r - 1]
            if r == 1 and i == j:
                c = c - 1
            img = c.hdiv(1).scale(-((-1) ** (r - 1))) if c.terms else c
        return img.recast(self.ctx)


def _iota_image(target: AlgebraContext, k: int):
    def fn(code):
        sign, r, i, j = decode(code)
        return target.gen(sign, r, i + k, j + k)

    return fn


def compose(outer: Morphism, inner: Morphism, kind: str, params=None) -> Morphism:
    """outer o inner."""
    if not inner.target.same_algebra(outer.source):
        raise UsageError("morphisms do not compose")

    def fn(code):
        return outer.apply(inner.image(code))

    return Morphism(kind, inner.source, outer.target, outer.table, fn, params)


_OMEGA_CACHE: dict = {}


def build_morphism(kind: str, ctx: AlgebraContext, tables: Callable[[AlgebraContext], object], k: int = 0, images: dict | None = None, target: AlgebraContext | None = None) -> Morphism:
    """Build a morphism whose source is ``ctx``.

    ``tables(ctx)`` returns the rule table for a context; ``k`` is the
    index shift for iota and psi; ``images`` and ``target`` define a subst.
    """
    m, n = ctx.m, ctx.n
    if kind == "rho":
        tgt = AlgebraContext(n, m, ctx.H, ctx.N)
        return Morphism("rho", ctx, tgt, tables(tgt), _rho_image(ctx, tgt))
    if kind == "omega":
        key = (ctx, id(tables(ctx)))
        hit = _OMEGA_CACHE.get(key)
        if hit is None:
            tb = tables(ctx)
            hit = Morphism("omega", ctx, ctx, tb, _OmegaImages(ctx, tb))
            _OMEGA_CACHE[key] = hit
        return hit
    if kind == "iota":
        if k < 0:
            raise UsageError("iota needs k >= 0")
        tgt = AlgebraContext(m + k, n, ctx.H, ctx.N)
        return Morphism("iota", ctx, tgt, tables(tgt), _iota_image(tgt, k), {"k": k})
    if kind == "zeta":
        om = build_morphism("omega", ctx, tables)
        rho = build_morphism("rho", ctx, tables)
        return compose(rho, om, "zeta")
    if kind == "psi":
        if k < 0:
            raise UsageError("psi needs k >= 0")
        if k == 0:
            tb = tables(ctx)
            return Morphism("identity", ctx, ctx, tb, lambda code: _gen_element(ctx, code), {"k": 0})
        om1 = build_morphism("omega", ctx, tables)
        io = build_morphism("iota", ctx, tables, k=k)
        om2 = build_morphism("omega", io.target, tables)
        return compose(om2, compose(io, om1, "psi"), "psi", {"k": k})
    if kind == "subst":
        if images is None or target is None:
            raise UsageError("subst needs an image table and a target context")
        tb = tables(target)

        def fn(code):
            if code not in images:
                raise UsageError(f"no image given for {gen_str(code)}")
            return images[code]

        return Morphism("subst", ctx, target, tb, fn)
    raise UsageError(f"unknown morphism kind {kind!r}")


def _gen_element(ctx, code):
    return Element(ctx, {(0, (code,)): ONE}, normal=True)


def apply(phi: Morphism, a: Element) -> Element:
    return phi.apply(a)


# ---------------------------------------------------------------- checks

ANCHOR_ZETA = "images of Drinfeld series under zeta"
ANCHOR_PSI = "images of Drinfeld series under psi"
ANCHOR_PSI_T = "psi image of t_pq as a quasideterminant"


def verify_zeta_images(ctx: AlgebraContext, tables, gauss_src: dict, gauss_tgt: dict) -> list[Check]:
    """zeta(f_i) = -e_{m+n-i}, zeta(e_i) = -f_{m+n-i}, zeta(d_j) = d_{m+n-j+1}^-1.

    ``gauss_src[sign]`` / ``gauss_tgt[sign]`` are GaussData of gl(m|n) and
    gl(n|m) at the same orders as ``ctx``.
    """
    d = ctx.size
    zeta = build_morphism("zeta", ctx, tables)
    ttab = zeta.table
    checks = []
    for sign in "-+":
        gs, gt = gauss_src[sign], gauss_tgt[sign]
        base = {"m": ctx.m, "n": ctx.n, "sign": sign}
        for i in range(1, d):
            def run_f(i=i, gs=gs, gt=gt):
                lhs = zeta.apply_series(gs.F[i + 1, i])
                return series_outcome(lhs, -gt.E[d - i, d - i + 1], ttab)

            def run_e(i=i, gs=gs, gt=gt):
                lhs = zeta.apply_series(gs.E[i, i + 1])
                return series_outcome(lhs, -gt.F[d - i + 1, d - i], ttab)

            checks.append(Check("zeta_f", ANCHOR_ZETA, {**base, "i": i}, run_f))
            checks.append(Check("zeta_e", ANCHOR_ZETA, {**base, "i": i}, run_e))
        for j in range(1, d + 1):
            def run_d(j=j, gs=gs, gt=gt):
                lhs = zeta.apply_series(gs.D[j])
                return series_outcome(lhs, gt.Dinv[d - j + 1], ttab)

            checks.append(Check("zeta_d", ANCHOR_ZETA, {**base, "j": j}, run_d))
    return checks


def verify_psi_images(ctx: AlgebraContext, k: int, tables, gauss_src: dict, gauss_tgt: dict) -> list[Check]:
    """psi(d_j) = d_{k+j}, psi(e_ij) = e_{k+i,k+j}, psi(f_ji) = f_{k+j,k+i},
    and psi(t_pq) equals the quasideterminant of the k-corner of the target
    bordered by row k+p and column k+q."""
    d = ctx.size
    psi = build_morphism("psi", ctx, tables, k=k)
    ttab = psi.table
    tctx = psi.target
    checks = []
    for sign in "-+":
        gs, gt = gauss_src[sign], gauss_tgt[sign]
        base = {"m": ctx.m, "n": ctx.n, "k": k, "sign": sign}
        for j in range(1, d + 1):
            def run_d(j=j, gs=gs, gt=gt):
                return series_outcome(psi.apply_series(gs.D[j]), gt.D[k + j], ttab)

            checks.append(Check("psi_d", ANCHOR_PSI, {**base, "j": j}, run_d))
        for i in range(1, d + 1):
            for j in range(i + 1, d + 1):
                def run_e(i=i, j=j, gs=gs, gt=gt):
                    return series_outcome(psi.apply_series(gs.E[i, j]), gt.E[k + i, k + j], ttab)

                def run_f(i=i, j=j, gs=gs, gt=gt):
                    return series_outcome(psi.apply_series(gs.F[j, i]), gt.F[k + j, k + i], ttab)

                label = "" if j == i + 1 else "_ij"
                checks.append(Check("psi_e" + label, ANCHOR_PSI, {**base, "ij": [i, j]}, run_e))
                checks.append(Check("psi_f" + label, ANCHOR_PSI, {**base, "ij": [j, i]}, run_f))
        for p in range(1, d + 1):
            for q in range(1, d + 1):
                def run_t(p=p, q=q, gs=gs, gt=gt, sign=sign):
                    src = generator_series(ctx, sign, p, q, gs.order)
                    lhs = psi.apply_series(src)
                    if k == 0:
                        rhs = gt.T[p, q]
                    else:
                        idx = list(range(1, k + 1))
                        A = gt.T.submatrix(idx + [k + p], idx + [k + q])
                        rhs = quasidet(A, k + 1, k + 1, ttab, gt.corner_inverse(k))
                    return series_outcome(lhs, rhs, ttab)

                checks.append(Check("psi_t", ANCHOR_PSI_T, {**base, "pq": [p, q]}, run_t))
    return checks


def relation_sample(phi: Morphism, src_table, rng, count: int = 20, max_level: int = 2) -> list[tuple[Element, Element]]:
    """Random defining-relation instances x*y - rule(x, y) (zero in the source)
    and their images under ``phi`` (which must normalize to zero)."""
    ctx = phi.source
    d = ctx.size
    out = []
    while len(out) < count:
        x = encode(rng.choice("+-"), rng.randint(1, max_level), rng.randint(1, d), rng.randint(1, d))
        y = encode(rng.choice("+-"), rng.randint(1, max_level), rng.randint(1, d), rng.randint(1, d))
        if x < y:
            x, y = y, x
        if x == y and not ctx.parity_of(x):
            continue
        rule = src_table.rule_for(x, y)
        rel = Element(ctx, {(0, (x, y)): ONE}) - rule.rhs.recast(ctx)
        out.append((rel, phi.apply(rel)))
    return out


__all__ = [
    "Morphism",
    "build_morphism",
    "compose",
    "apply",
    "verify_zeta_images",
    "verify_psi_images",
    "relation_sample",
]
