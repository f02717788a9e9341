"""Intermediate identities behind the centrality of the Berezinian, each at
the smallest gl(m|n) where it makes sense.

Two-variable identities A(u) B(v) = B(v) A(u) are checked for every pair of
coefficients.  The (u - v)-shifted relations are checked coefficientwise in
u^p v^q; the one mixing e^-(v) and e^+(v) runs over both positive and
negative powers of v.
"""
from __future__ import annotations

from .algebra import AlgebraContext
from .berezinian import berezinian_direct, padded_order
from .checks import Check, Outcome, element_outcome
from .gauss import gauss_decompose
from .series import TruncSeries

A_STEPS = "intermediate identities for centrality of the Berezinian"


class StepData:
    """Lazily computed Gauss data and Berezinian series per (m, n, sign)."""

    def __init__(self, N: int, H: int, tables):
        self.N, self.H = N, H
        self.tables = tables
        self._g: dict = {}
        self._b: dict = {}

    def ctx(self, m, n) -> AlgebraContext:
        return AlgebraContext(m, n, self.H, self.N)

    def table(self, m, n):
        return self.tables(self.ctx(m, n))

    def gauss(self, m, n, sign, padded=False):
        key = (m, n, sign, padded)
        hit = self._g.get(key)
        if hit is None:
            ctx = self.ctx(m, n)
            order = padded_order(ctx, sign) if padded else ctx.N
            hit = gauss_decompose(ctx, sign, self.table(m, n), order)
            self._g[key] = hit
        return hit

    def ber(self, m, n, sign) -> TruncSeries:
        key = (m, n, sign)
        hit = self._b.get(key)
        if hit is None:
            hit = berezinian_direct(self.ctx(m, n), sign, self.table(m, n)).series
            self._b[key] = hit
        return hit


def _commute(A: TruncSeries, B: TruncSeries, table) -> Outcome:
    for p in range(A.order + 1):
        a = A.coeffs[p]
        if not a.terms:
            continue
        for q in range(B.order + 1):
            b = B.coeffs[q]
            out = element_outcome(table.mul(a, b) - table.mul(b, a), table)
            if not out.passed:
                return Outcome(False, out.counterexample, {"u": p, "v": q})
    return Outcome(True)


def _commute_check(label, params, data: StepData, m, n, left, right) -> Check:
    """Check that left() (a series in u) commutes with right() (in v)."""

    def run():
        return _commute(left(), right(), data.table(m, n))

    return Check(label, A_STEPS, {"m": m, "n": n, **params}, run)


def de_shift_relation(data: StepData, j: int, tail_hpow: int = 1) -> Check:
    """(u-v) e_1(v) d_j(u) = (u-v-h) d_j(u) e_1(v) + h d_j(u) e_1(u) in
    gl(1|1), plus series.  ``tail_hpow`` is the power of h on the last term;
    anything but 1 gives a false identity (used as a negative control)."""
    m, n = 1, 1

    def run():
        tb = data.table(m, n)
        g = data.gauss(m, n, "+")
        E, D = g.E[1, 2].coeffs, g.D[j].coeffs
        zero = data.ctx(m, n).zero()
        c = lambda s, k: s[k] if 0 <= k < len(s) else zero
        top = min(len(E), len(D)) - 1
        for p in range(top + 1):
            for q in range(top + 1):
                lhs = tb.dot([(c(E, q), c(D, p - 1)), (-c(E, q - 1), c(D, p))])
                rhs = tb.dot([(c(D, p - 1), c(E, q)), (-c(D, p), c(E, q - 1))]) - tb.mul(c(D, p), c(E, q)).hmul(1)
                if q == 0:
                    rhs = rhs + tb.dot([(c(D, a), c(E, p - a)) for a in range(p + 1)]).hmul(tail_hpow)
                out = element_outcome(lhs - rhs, tb)
                if not out.passed:
                    return Outcome(False, out.counterexample, {"u": p, "v": q})
        return Outcome(True)

    params = {"m": m, "n": n, "j": j}
    if tail_hpow != 1:
        params["tail_hpow"] = tail_hpow
    return Check("de_shift_relation", A_STEPS, params, run)


def ito_shift_relation(data: StepData, j: int, sgn: int | None = None) -> Check:
    """(u-v)(e_1^-(v) - e_1^+(v)) d_j^+(u) = (u-v-h) d_j^+(u)(e_1^-(v) - e_1^+(v))
    for j = 1, with +h for j = 2, in gl(2|0).  ``sgn`` overrides the sign in
    front of h (negative controls)."""
    m, n, i = 2, 0, 1
    default = -1 if j == i else 1
    if sgn is None:
        sgn = default

    def run():
        tb = data.table(m, n)
        ctx = data.ctx(m, n)
        N = ctx.N
        em = data.gauss(m, n, "-").E[i, i + 1].coeffs
        ep = data.gauss(m, n, "+").E[i, i + 1].coeffs
        D = data.gauss(m, n, "+").D[j].coeffs
        zero = ctx.zero()

        def ev(t):
            # coefficient of v^t in e^-(v) - e^+(v)
            return em[-t] if t <= -1 else -ep[t]

        d = lambda k: D[k] if 0 <= k <= N else zero
        for p in range(N + 1):
            for t in range(-N + 1, N + 1):
                lhs = tb.dot([(ev(t), d(p - 1)), (-ev(t - 1), d(p))])
                rhs = tb.dot([(d(p - 1), ev(t)), (-d(p), ev(t - 1))]) + tb.mul(d(p), ev(t)).scale(sgn, 1)
                out = element_outcome(lhs - rhs, tb)
                if not out.passed:
                    return Outcome(False, out.counterexample, {"u": p, "v": t})
        return Outcome(True)

    params = {"m": m, "n": n, "i": i, "j": j}
    if sgn != default:
        params["sign"] = sgn
    return Check("ito_shift_relation", A_STEPS, params, run)


def proof_step_checks(N: int, H: int, tables, wide: bool = True) -> list[Check]:
    """All intermediate identities; ``wide`` adds the gl(2|2) instance of
    e_m commuting with d_{m+s}."""
    data = StepData(N, H, tables)
    G = data.gauss
    checks: list[Check] = []
    add = checks.append

    # e_1^+(u) commutes with b^+(v) in gl(1|1)
    add(_commute_check("e1_b11_commute", {}, data, 1, 1, lambda: G(1, 1, "+").E[1, 2], lambda: data.ber(1, 1, "+")))

    def ratio(m, n, sign, i):
        def f():
            g = G(m, n, sign)
            return g.D[i].mul(g.Dinv[i + 1], data.table(m, n))

        return f

    # e_m^+(u) and f_m^+(u) commute with d_m^+(v) d_{m+1}^+(v)^-1
    add(_commute_check("em_dd_ratio_commute", {"i": 2}, data, 2, 1, lambda: G(2, 1, "+").E[2, 3], ratio(2, 1, "+", 2)))
    add(_commute_check("fm_dd_ratio_commute", {"i": 1}, data, 1, 1, lambda: G(1, 1, "+").F[2, 1], ratio(1, 1, "+", 1)))
    add(_commute_check("fm_dd_ratio_commute", {"i": 2}, data, 2, 1, lambda: G(2, 1, "+").F[3, 2], ratio(2, 1, "+", 2)))

    # t_12^+(u) commutes with t'_{s+1,s+1}^+(v) in gl(1|s), s = 2
    add(_commute_check("t12_tprime_commute", {"s": 2}, data, 1, 2, lambda: G(1, 2, "+").T[1, 2], lambda: G(1, 2, "+").Tinv[3, 3]))
    # e_1^+(u), f_1^+(u) commute with d_{s+1}^+(v), s = 2
    add(_commute_check("e1_d_commute", {"j": 3}, data, 1, 2, lambda: G(1, 2, "+").E[1, 2], lambda: G(1, 2, "+").D[3]))
    add(_commute_check("fm_d_commute", {"i": 1, "j": 3}, data, 1, 2, lambda: G(1, 2, "+").F[2, 1], lambda: G(1, 2, "+").D[3]))
    if wide:
        # e_m^+(u), f_m^+(u) commute with d_{m+s}^+(v) for m = 2, s = 2
        add(_commute_check("em_d_commute", {"i": 2, "j": 4}, data, 2, 2, lambda: G(2, 2, "+").E[2, 3], lambda: G(2, 2, "+").D[4]))
        add(_commute_check("fm_d_commute", {"i": 2, "j": 4}, data, 2, 2, lambda: G(2, 2, "+").F[3, 2], lambda: G(2, 2, "+").D[4]))

    # e_i^-(u), f_i^-(u) commute with d_j^+(v): j in the odd block (gl(2|1)),
    # and j <= m with j != i, i+1 (gl(3|0))
    for m, n, i, j in ((2, 1, 1, 3), (3, 0, 1, 3), (3, 0, 2, 1)):
        add(_commute_check("eminus_dplus_commute", {"i": i, "j": j}, data, m, n,
                           lambda m=m, n=n, i=i: G(m, n, "-").E[i, i + 1], lambda m=m, n=n, j=j: G(m, n, "+").D[j]))
        add(_commute_check("fminus_dplus_commute", {"i": i, "j": j}, data, m, n,
                           lambda m=m, n=n, i=i: G(m, n, "-").F[i + 1, i], lambda m=m, n=n, j=j: G(m, n, "+").D[j]))

    # e_i^±(u), f_i^±(u) commute with b^+(v), and e_i^+, f_i^+ with b^-(v)
    for m, n in ((2, 1), (1, 2)):
        for i in range(1, m + n):
            for gs, bs in (("+", "+"), ("-", "+"), ("+", "-")):
                tag = {"+": "plus", "-": "minus"}
                add(_commute_check(f"e{tag[gs]}_b{tag[bs]}_commute", {"i": i}, data, m, n,
                                   lambda m=m, n=n, i=i, gs=gs: G(m, n, gs).E[i, i + 1], lambda m=m, n=n, bs=bs: data.ber(m, n, bs)))
                add(_commute_check(f"f{tag[gs]}_b{tag[bs]}_commute", {"i": i}, data, m, n,
                                   lambda m=m, n=n, i=i, gs=gs: G(m, n, gs).F[i + 1, i], lambda m=m, n=n, bs=bs: data.ber(m, n, bs)))

    for j in (1, 2):
        add(de_shift_relation(data, j))
        add(ito_shift_relation(data, j))

    # e_1^+(u) commutes with d_1^+(v) d_2^+(v-h) in gl(2|0)
    def dd_shift():
        g = G(2, 0, "+", padded=True)
        tb = data.table(2, 0)
        return g.D[1].mul(g.D[2].shift(-1), tb).truncate(N)

    add(_commute_check("e_dd_shift_commute", {"i": 1}, data, 2, 0, lambda: G(2, 0, "+").E[1, 2], dd_shift))
    return checks


__all__ = ["StepData", "proof_step_checks", "de_shift_relation", "ito_shift_relation"]
