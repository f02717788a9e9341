"""Quantum determinants and the quantum Berezinian, with their verification suites.

Argument shifts u -> u - c h cost H orders on up series (see
``TruncSeries.shift``), so plus-sign products are formed at order N + H and
cut back to N.  Generator-shaped coefficients b^(±r) divide by h and are
therefore read from series computed at H + 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

from .algebra import AlgebraContext, Element, UsageError, encode, serialize
from .checks import Check, Outcome, coefficient, element_outcome, series_outcome
from .classical import ClassicalElement, classical_image
from .coeffs import ONE, Q, ZERO
from .gauss import GaussData, gauss_decompose
from .morphisms import build_morphism
from .series import FREE, UP, TruncSeries, direction_of, generator_matrix, generator_series


def _perm_sign(p) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def padded_order(ctx: AlgebraContext, sign: str) -> int:
    """Series order needed so that one argument shift still leaves order N."""
    return ctx.N + (ctx.H if sign == "+" else 0)


def _product(series, ring) -> TruncSeries:
    out = series[0]
    for s in series[1:]:
        out = out.mul(s, ring)
    return out


def _signed_sum(terms, ctx, direction, order):
    acc = TruncSeries.constant(ctx, direction, 0, order)
    for sgn, s in terms:
        s = s.truncate(order)
        acc = acc + s if sgn > 0 else acc - s
    return acc


@dataclass
class BerezinianData:
    sign: str
    series: TruncSeries
    coefficients: dict  # r -> b^(r) (sign '-') or b^(-r) (sign '+')


def quantum_determinant(ctx: AlgebraContext, sign: str, mhat: int, table, entries=None) -> TruncSeries:
    """C(u) = sum_tau sgn(tau) t_{tau(1)1}(u) t_{tau(2)2}(u-h) ... over S_mhat.

    ``entries(i, j)`` supplies the series (default: generator series at the
    padded order); the result has order ``ctx.N``.
    """
    if not 1 <= mhat <= ctx.m:
        raise UsageError(f"quantum determinant size {mhat} out of range for gl({ctx.m}|{ctx.n})")
    order = padded_order(ctx, sign)
    if entries is None:
        entries = lambda i, j: generator_series(ctx, sign, i, j, order)
    terms = []
    for tau in permutations(range(mhat)):
        factors = [entries(tau[k] + 1, k + 1).shift(-k) for k in range(mhat)]
        terms.append((_perm_sign(tau), _product(factors, table)))
    return _signed_sum(terms, ctx, direction_of(sign), ctx.N)


def qdet_factored(g: GaussData, mhat: int, table) -> TruncSeries:
    """d_1(u) d_2(u-h) ... d_mhat(u-(mhat-1)h)."""
    ctx = g.ctx
    factors = [g.D[k + 1].shift(-k) for k in range(mhat)]
    return _product(factors, table).truncate(ctx.N)


def _ber_direct_series(ctx: AlgebraContext, sign: str, table) -> TruncSeries:
    m, n = ctx.m, ctx.n
    order = padded_order(ctx, sign)
    direction = direction_of(sign)
    one = TruncSeries.constant(ctx, direction, 1, ctx.N)
    first = quantum_determinant(ctx, sign, m, table) if m else one
    if not n:
        return first
    Tinv = generator_matrix(ctx, sign, order).inverse(table)
    terms = []
    for sigma in permutations(range(n)):
        # k-th factor t'_{m+k, m+sigma(k)}(u - (m-k) h), k = 1..n
        factors = [Tinv[m + k, m + sigma[k - 1] + 1].shift(k - m) for k in range(1, n + 1)]
        terms.append((_perm_sign(sigma), _product(factors, table)))
    second = _signed_sum(terms, ctx, direction, ctx.N)
    return first.mul(second, table)


def _coefficients(series: TruncSeries, sign: str, target: AlgebraContext, top: int) -> dict:
    out = {}
    for r in range(1, top + 1):
        idx = r if sign == "-" else r - 1
        if idx > series.order:
            break
        out[r] = coefficient(series, sign, r, target)
    return out


def berezinian_direct(ctx: AlgebraContext, sign: str, table, with_coefficients: bool = False) -> BerezinianData:
    """The defining double sum.  With ``with_coefficients`` the series is
    also computed at H + 1 so that b^(±r), r <= N, are exact at H."""
    series = _ber_direct_series(ctx, sign, table)
    coeffs = {}
    if with_coefficients:
        hi = _ber_direct_series(ctx.with_orders(H=ctx.H + 1), sign, table)
        coeffs = _coefficients(hi, sign, ctx, ctx.N)
    return BerezinianData(sign, series, coeffs)


def berezinian_factored(g: GaussData, table) -> BerezinianData:
    """d_1(u) ... d_m(u-(m-1)h) d_{m+1}(u-(m-1)h)^-1 ... d_{m+n}(u-(m-n)h)^-1.

    ``g`` must be computed at the padded order for its sign.
    """
    ctx = g.ctx
    m, n = ctx.m, ctx.n
    factors = [g.D[k].shift(-(k - 1)) for k in range(1, m + 1)]
    factors += [g.Dinv[m + k].shift(k - m) for k in range(1, n + 1)]
    return BerezinianData(g.sign, _product(factors, table).truncate(ctx.N), {})


def zeta_split_series(ctx: AlgebraContext, sign: str, tables) -> TruncSeries:
    """C_m(u) * zeta_{n|m}(C_n(u - (m-n) h)), with C_n taken in gl(n|m)."""
    m, n = ctx.m, ctx.n
    table = tables(ctx)
    direction = direction_of(sign)
    first = quantum_determinant(ctx, sign, m, table) if m else TruncSeries.constant(ctx, direction, 1, ctx.N)
    if not n:
        return first
    dual = AlgebraContext(n, m, ctx.H, padded_order(ctx, sign))
    cn = quantum_determinant(dual, sign, n, tables(dual))
    # cn has the padded order so the shift still reaches order N
    shifted = cn.shift(n - m).truncate(ctx.N)
    zeta = build_morphism("zeta", AlgebraContext(n, m, ctx.H, ctx.N), tables)
    return first.mul(zeta.apply_series(shifted), table)


# ---------------------------------------------------------------- suites

A_QDET = "quantum determinant as an ordered product of d-series"
A_BER = "Berezinian: definition, d-factorization and zeta split agree"
A_CENTRAL = "Berezinian coefficients are central"
A_CLASSICAL = "classical limit of Berezinian coefficients"
A_INDEP = "independence of Berezinian coefficients (degree <= 2 rank)"
A_DELTA = "Berezinian through delta-series for sl(n|n)"


def qdet_checks(ctx: AlgebraContext, table, gauss_padded: dict) -> list[Check]:
    checks = []
    for sign in "-+":
        g = gauss_padded[sign]
        for mhat in range(1, ctx.m + 1):
            def run(sign=sign, mhat=mhat, g=g):
                return series_outcome(quantum_determinant(ctx, sign, mhat, table), qdet_factored(g, mhat, table), table)

            checks.append(Check("qdet_factored", A_QDET, {"m": ctx.m, "n": ctx.n, "sign": sign, "mhat": mhat}, run))
    return checks


def berezinian_checks(ctx: AlgebraContext, tables, gauss_padded: dict) -> list[Check]:
    table = tables(ctx)
    checks = []
    for sign in "-+":
        cache = {}

        def direct(sign=sign, cache=cache):
            if "d" not in cache:
                cache["d"] = berezinian_direct(ctx, sign, table).series
            return cache["d"]

        def run_fact(sign=sign, direct=direct):
            fact = berezinian_factored(gauss_padded[sign], table).series
            return series_outcome(direct(), fact, table)

        def run_zeta(sign=sign, direct=direct):
            return series_outcome(direct(), zeta_split_series(ctx, sign, tables), table)

        base = {"m": ctx.m, "n": ctx.n, "sign": sign}
        checks.append(Check("ber_factored", A_BER, dict(base), run_fact))
        checks.append(Check("ber_zeta_split", A_BER, dict(base), run_zeta))
    return checks


def _generators(ctx: AlgebraContext, sign: str, top: int):
    d = ctx.size
    for k in range(1, d + 1):
        for l in range(1, d + 1):
            for s in range(1, top + 1):
                yield k, l, s, ctx.gen(sign, s, k, l)


def centrality_checks(ctx: AlgebraContext, table, bdata: dict, drinfeld: dict | None = None) -> list[Check]:
    """[b^(±r), g] = 0 for every generator g of level <= N, one check per
    (b-sign, r, generator sign, k, l); optional cross-check against
    Drinfeld coefficients ``drinfeld[(name, sign, idx, s)]``."""
    checks = []
    for bsign in "-+":
        coeffs = bdata[bsign].coefficients
        for r, b in sorted(coeffs.items()):
            for gsign in "-+":
                for k in range(1, ctx.size + 1):
                    for l in range(1, ctx.size + 1):
                        def run(b=b, gsign=gsign, k=k, l=l):
                            for s in range(1, ctx.N + 1):
                                g = ctx.gen(gsign, s, k, l)
                                out = element_outcome(table.mul(b, g) - table.mul(g, b), table)
                                if not out.passed:
                                    return Outcome(False, out.counterexample, {"s": s})
                            return Outcome(True)

                        params = {"m": ctx.m, "n": ctx.n, "b": f"{bsign}{r}", "gen_sign": gsign, "kl": [k, l]}
                        checks.append(Check("central_t", A_CENTRAL, params, run))
            if drinfeld:
                def run_dr(b=b):
                    for key, x in sorted(drinfeld.items()):
                        out = element_outcome(table.mul(b, x) - table.mul(x, b), table)
                        if not out.passed:
                            return Outcome(False, out.counterexample, {"generator": "%s%s_%s^(%s)" % key})
                    return Outcome(True)

                checks.append(Check("central_drinfeld", A_CENTRAL, {"m": ctx.m, "n": ctx.n, "b": f"{bsign}{r}"}, run_dr))
    return checks


def drinfeld_coefficients(ctx: AlgebraContext, table, gauss_hi: dict) -> dict:
    """d_j^(±s), e_i^(±s), f_i^(±s) for s <= N, exact at ctx.H."""
    out = {}
    d = ctx.size
    for sign, g in gauss_hi.items():
        for s in range(1, ctx.N + 1):
            for j in range(1, d + 1):
                out[("d", sign, j, s)] = coefficient(g.D[j], sign, s, ctx)
            for i in range(1, d):
                out[("e", sign, i, s)] = coefficient(g.E[i, i + 1], sign, s, ctx)
                out[("f", sign, i, s)] = coefficient(g.F[i + 1, i], sign, s, ctx)
    return out


def classical_limit_checks(ctx: AlgebraContext, table, bdata: dict) -> list[Check]:
    """h^0 part of b^(±r) is sum_i (-1)^i t_ii^(±r), and its classical image
    I(r-1) (resp. I(-r)) supercommutes with every e_kl(s)."""
    m, n, d = ctx.m, ctx.n, ctx.size
    checks = []
    for sign in "-+":
        for r, b in sorted(bdata[sign].coefficients.items()):
            def run(b=b, r=r, sign=sign):
                expected = ctx.zero()
                for i in range(1, d + 1):
                    expected = expected + ctx.gen(sign, r, i, i).scale(-1 if i > m else 1)
                got = table.normalize(b).h_part(0)
                diff = got - expected
                if diff.terms:
                    return Outcome(False, serialize(diff))
                image = classical_image(got)
                loop_deg = r - 1 if sign == "-" else -r
                if image != ClassicalElement.identity_loop(m, n, loop_deg):
                    return Outcome(False, repr(image), {"stage": "image"})
                for k in range(1, d + 1):
                    for l in range(1, d + 1):
                        for s in range(-ctx.N - 1, ctx.N + 1):
                            br = image.supercomm(ClassicalElement.basis(m, n, k, l, s))
                            if br:
                                return Outcome(False, repr(br), {"kl": [k, l], "s": s})
                return Outcome(True)

            checks.append(Check("classical_limit", A_CLASSICAL, {"m": m, "n": n, "b": f"{sign}{r}"}, run))
    return checks


def rank_over_q(rows: list[dict]) -> int:
    """Exact rank of sparse rows {column: rational}."""
    pivots: dict = {}
    rank = 0
    for row in rows:
        row = {k: Q(v) for k, v in row.items() if v}
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                inv = ONE / row[col]
                pivots[col] = {k: v * inv for k, v in row.items()}
                rank += 1
                break
            f = row[col]
            for k, v in piv.items():
                nv = row.get(k, ZERO) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return rank


def independence_probe(ctx: AlgebraContext, table, bdata: dict, R: int) -> dict:
    """Rank of the normal forms of all monomials of degree <= 2 in
    {b^(±r) : r <= R}."""
    if R > ctx.N:
        raise UsageError(f"R={R} exceeds the series order N={ctx.N}")
    gens = [bdata["-"].coefficients[r] for r in range(1, R + 1)]
    gens += [bdata["+"].coefficients[r] for r in range(1, R + 1)]
    monos = [ctx.one()] + list(gens)
    for a in range(len(gens)):
        for b in range(a, len(gens)):
            monos.append(table.mul(gens[a], gens[b]))
    rows = [dict(table.normalize(x).terms) for x in monos]
    rank = rank_over_q(rows)
    return {"monomials": len(monos), "rank": rank}


def independence_checks(ctx: AlgebraContext, table, bdata: dict, R: int) -> list[Check]:
    def run():
        res = independence_probe(ctx, table, bdata, R)
        ok = res["rank"] == res["monomials"]
        return Outcome(ok, None if ok else f"rank {res['rank']} < {res['monomials']}", res)

    return [Check("independence_rank", A_INDEP, {"m": ctx.m, "n": ctx.n, "R": R, "max_degree": 2}, run)]


# ---------------------------------------------------------------- delta / sl(n|n)


def delta_series(g: GaussData, table) -> dict[int, TruncSeries]:
    """delta_i(u) = d_1(u)^-1 d_{i+1}(u), i = 1..2n-1."""
    return {i: g.Dinv[1].mul(g.D[i + 1], table) for i in range(1, g.size)}


def delta_factorization(deltas: dict, n: int, ring, order: int) -> TruncSeries:
    """delta_1(u-h) ... delta_{n-1}(u-(n-1)h)
       * delta_n(u-(n-1)h)^-1 ... delta_{2n-2}(u-h)^-1 delta_{2n-1}(u)^-1."""
    factors = [deltas[k].shift(-k) for k in range(1, n)]
    factors += [deltas[n - 1 + j].inverse(ring).shift(-(n - j)) for j in range(1, n + 1)]
    return _product(factors, ring).truncate(order)


def _symbol_context(n: int, H: int, N: int) -> AlgebraContext:
    """Free symbols s[±r; i, i] standing for delta_i^(±r), i = 1..2n-1."""
    return AlgebraContext(2 * n - 1, 0, H, N)


def _symbolic_deltas(sym: AlgebraContext, sign: str, n: int, order: int) -> dict:
    out = {}
    for i in range(1, 2 * n):
        ser = generator_series(sym, sign, i, i, order)
        out[i] = ser
    return out


def delta_checks(ctx: AlgebraContext, tables, gauss_padded: dict, gauss_hi_padded: dict, bdata: dict) -> list[Check]:
    """(a) delta_i has unit constant term; (b) the delta factorization of b
    holds; (c) every b^(±r) equals the free polynomial in delta-coefficients
    read off from the factorization, after substituting the actual
    coefficients."""
    if ctx.m != ctx.n:
        raise UsageError(f"delta-sl suite needs m = n, got gl({ctx.m}|{ctx.n})")
    n = ctx.n
    table = tables(ctx)
    checks = []
    for sign in "-+":
        base = {"m": n, "n": n, "sign": sign}

        def run_unit(sign=sign):
            deltas = delta_series(gauss_padded[sign], table)
            for i, s in sorted(deltas.items()):
                c0 = table.normalize(s.coeffs[0])
                if sign == "-" and c0 != ctx.one():
                    return Outcome(False, serialize(c0 - ctx.one()), {"i": i})
                if sign == "+" and (c0 - ctx.one()).h_part(0).terms:
                    return Outcome(False, serialize(c0 - ctx.one()), {"i": i})
            return Outcome(True)

        def run_fact(sign=sign):
            deltas = delta_series(gauss_padded[sign], table)
            rhs = delta_factorization(deltas, n, table, ctx.N)
            return series_outcome(bdata[sign].series, rhs, table)

        def run_poly(sign=sign):
            hi = ctx.with_orders(H=ctx.H + 1)
            order = padded_order(hi, sign)
            # free computation of b in terms of symbols, at H+1 so b^(r) is exact
            sym_hi = _symbol_context(n, hi.H, order)
            sym_series = _symbolic_deltas(sym_hi, sign, n, order)
            free_b = delta_factorization(sym_series, n, FREE, ctx.N)
            sym = _symbol_context(n, ctx.H, ctx.N)
            # actual delta coefficients, exact at H
            deltas = delta_series(gauss_hi_padded[sign], table)
            images = {}
            for i in range(1, 2 * n):
                for r in range(1, deltas[i].order + 2):
                    idx = r if sign == "-" else r - 1
                    if idx > deltas[i].order:
                        continue
                    images[encode(sign, r, i, i)] = coefficient(deltas[i], sign, r, ctx)
            subst = build_morphism("subst", sym, tables, images=images, target=ctx)
            for r, b in sorted(bdata[sign].coefficients.items()):
                poly = coefficient(free_b, sign, r, sym)
                got = subst.apply(poly)
                out = element_outcome(got - b, table)
                if not out.passed:
                    return Outcome(False, out.counterexample, {"r": r})
            return Outcome(True)

        checks.append(Check("delta_unit", A_DELTA, dict(base), run_unit))
        checks.append(Check("delta_factorization", A_DELTA, dict(base), run_fact))
        checks.append(Check("delta_polynomial", A_DELTA, dict(base), run_poly))
    return checks


__all__ = [
    "BerezinianData",
    "padded_order",
    "quantum_determinant",
    "qdet_factored",
    "berezinian_direct",
    "berezinian_factored",
    "zeta_split_series",
    "qdet_checks",
    "berezinian_checks",
    "centrality_checks",
    "drinfeld_coefficients",
    "classical_limit_checks",
    "independence_probe",
    "independence_checks",
    "rank_over_q",
    "delta_series",
    "delta_factorization",
    "delta_checks",
]
