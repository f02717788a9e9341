"""Gauss decomposition T = F D E of the generator matrices via quasideterminants.

Leading corner inverses are computed once per corner size and shared by the
d, e and f entries that border them.
"""
from __future__ import annotations

from itertools import combinations

from .algebra import AlgebraContext, UsageError
from .checks import Check, Outcome, coefficient, element_outcome, series_outcome
from .series import (
    SeriesMatrix,
    TruncSeries,
    direction_of,
    generator_matrix,
    quasidet,
    series_dot,
)


class GaussData:
    """Gauss factors of T^-(u) (sign '-') or T^+(u) (sign '+').

    Indices are 1-based: ``D[i]``, ``E[i, j]`` with i < j, ``F[j, i]`` with
    j > i.  Everything is reduced to normal form by ``table``.
    """

    def __init__(self, ctx: AlgebraContext, sign: str, table, order: int | None = None):
        if sign not in "-+" or len(sign) != 1:
            raise UsageError(f"sign must be '-' or '+', got {sign!r}")
        self.ctx = ctx
        self.sign = sign
        self.table = table
        self.order = ctx.N if order is None else order
        self.direction = direction_of(sign)
        self.T = generator_matrix(ctx, sign, self.order)
        self._corner_inv: dict[int, SeriesMatrix] = {}
        self.D: dict[int, TruncSeries] = {}
        self.Dinv: dict[int, TruncSeries] = {}
        self.E: dict[tuple[int, int], TruncSeries] = {}
        self.F: dict[tuple[int, int], TruncSeries] = {}
        self._Tinv = None
        self._eprime = None
        self._fprime = None
        self._build()

    @property
    def size(self) -> int:
        return self.ctx.size

    def corner_inverse(self, k: int) -> SeriesMatrix:
        """Inverse of the leading k x k corner of T."""
        hit = self._corner_inv.get(k)
        if hit is None:
            idx = list(range(1, k + 1))
            hit = self.T.submatrix(idx, idx).inverse(self.table)
            self._corner_inv[k] = hit
        return hit

    def _bordered(self, i: int, row: int, col: int) -> TruncSeries:
        """Quasideterminant of the corner 1..i-1 bordered by ``row`` and
        ``col``, boxed at (row, col)."""
        if i == 1:
            return self.T[row, col]
        idx = list(range(1, i))
        A = self.T.submatrix(idx + [row], idx + [col])
        return quasidet(A, i, i, self.table, self.corner_inverse(i - 1))

    def _build(self):
        d = self.size
        tb = self.table
        for i in range(1, d + 1):
            di = self._bordered(i, i, i)
            self.D[i] = di
            self.Dinv[i] = di.inverse(tb)
        for i in range(1, d + 1):
            for j in range(i + 1, d + 1):
                self.F[j, i] = self._bordered(i, j, i).mul(self.Dinv[i], tb)
                self.E[i, j] = self.Dinv[i].mul(self._bordered(i, i, j), tb)

    # derived data

    @property
    def Tinv(self) -> SeriesMatrix:
        if self._Tinv is None:
            self._Tinv = self.T.inverse(self.table)
        return self._Tinv

    def e_prime(self, i: int, j: int) -> TruncSeries:
        if self._eprime is None:
            self._eprime, self._fprime = inverse_gauss_series(self)
        return self._eprime[i, j]

    def f_prime(self, j: int, i: int) -> TruncSeries:
        if self._fprime is None:
            self._eprime, self._fprime = inverse_gauss_series(self)
        return self._fprime[j, i]

    def matrices(self) -> tuple[SeriesMatrix, SeriesMatrix, SeriesMatrix]:
        """(F, D, E) as full matrices."""
        d = self.size
        one = TruncSeries.constant(self.ctx, self.direction, 1, self.order)
        zero = TruncSeries.constant(self.ctx, self.direction, 0, self.order)
        F = [[self.F[i, j] if i > j else (one if i == j else zero) for j in range(1, d + 1)] for i in range(1, d + 1)]
        D = [[self.D[i] if i == j else zero for j in range(1, d + 1)] for i in range(1, d + 1)]
        E = [[self.E[i, j] if i < j else (one if i == j else zero) for j in range(1, d + 1)] for i in range(1, d + 1)]
        mk = lambda rows: SeriesMatrix(self.ctx, self.direction, rows)
        return mk(F), mk(D), mk(E)


def gauss_decompose(ctx: AlgebraContext, sign: str, table, order: int | None = None) -> GaussData:
    return GaussData(ctx, sign, table, order)


def drinfeld_series(g: GaussData, which: str, *idx: int) -> TruncSeries:
    """Access d_i, e_ij, f_ji, e_i = e_{i,i+1} or f_i = f_{i+1,i}."""
    d = g.size
    try:
        if which == "d":
            (i,) = idx
            if not 1 <= i <= d:
                raise IndexError
            return g.D[i]
        if which == "e":
            (i,) = idx
            if not 1 <= i < d:
                raise IndexError
            return g.E[i, i + 1]
        if which == "f":
            (i,) = idx
            if not 1 <= i < d:
                raise IndexError
            return g.F[i + 1, i]
        if which == "e_ij":
            return g.E[idx]
        if which == "f_ji":
            return g.F[idx]
    except (IndexError, KeyError, ValueError):
        raise IndexError(f"{which}{idx} is out of range for gl({g.ctx.m}|{g.ctx.n})") from None
    raise UsageError(f"unknown Drinfeld series {which!r}")


def _chains(i: int, j: int):
    """All chains i = i0 < i1 < ... < is = j."""
    inner = list(range(i + 1, j))
    for k in range(len(inner) + 1):
        for mid in combinations(inner, k):
            yield (i,) + mid + (j,)


def inverse_gauss_series(g: GaussData):
    """Entries of E^-1 and F^-1 as alternating sums over index chains."""
    tb = g.table
    d = g.size
    ep, fp = {}, {}
    for i in range(1, d + 1):
        for j in range(i + 1, d + 1):
            e_acc = f_acc = None
            for chain in _chains(i, j):
                s = len(chain) - 1
                e_term = g.E[chain[0], chain[1]]
                for a, b in zip(chain[1:], chain[2:]):
                    e_term = e_term.mul(g.E[a, b], tb)
                rev = chain[::-1]
                f_term = g.F[rev[0], rev[1]]
                for a, b in zip(rev[1:], rev[2:]):
                    f_term = f_term.mul(g.F[a, b], tb)
                if s % 2:
                    e_term, f_term = -e_term, -f_term
                e_acc = e_term if e_acc is None else e_acc + e_term
                f_acc = f_term if f_acc is None else f_acc + f_term
            ep[i, j] = e_acc
            fp[j, i] = f_acc
    return ep, fp


# ---------------------------------------------------------------- checks

ANCHOR_GAUSS = "Gauss decomposition T = F D E"
ANCHOR_EXPAND = "entry expansions of t and t' through d, e, f"
ANCHOR_EINV = "path-sum formulas for E^-1 and F^-1"
ANCHOR_DCOMM = "commutativity of the d-series"


def _triple(a, b, c, tb):
    return a.mul(b, tb).mul(c, tb)


def verify_gauss_identities(g: GaussData, table) -> list[Check]:
    """T = F D E entrywise and the six entry expansions of t and t'."""
    d = g.size
    tb = table
    checks: list[Check] = []
    base = {"m": g.ctx.m, "n": g.ctx.n, "sign": g.sign}

    def fde():
        F, D, E = g.matrices()
        prod = F.matmul(D, tb).matmul(E, tb)
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                out = series_outcome(prod[i, j], g.T[i, j], tb)
                if not out.passed:
                    return Outcome(False, out.counterexample, {"entry": [i, j], **out.detail})
        return Outcome(True)

    checks.append(Check("gauss_fde", ANCHOR_GAUSS, dict(base), fde))

    def expand_t(i, j):
        def run():
            if i == j:
                rhs = g.D[i]
                for k in range(1, i):
                    rhs = rhs + _triple(g.F[i, k], g.D[k], g.E[k, i], tb)
            elif i < j:
                rhs = g.D[i].mul(g.E[i, j], tb)
                for k in range(1, i):
                    rhs = rhs + _triple(g.F[i, k], g.D[k], g.E[k, j], tb)
            else:
                # row i > column j: t_ij = f_ij d_j + sum_{k<j} f_ik d_k e_kj
                rhs = g.F[i, j].mul(g.D[j], tb)
                for k in range(1, j):
                    rhs = rhs + _triple(g.F[i, k], g.D[k], g.E[k, j], tb)
            return series_outcome(g.T[i, j], rhs, tb)

        return run

    def expand_tp(i, j):
        def run():
            Ti = g.Tinv
            if i == j:
                rhs = g.Dinv[i]
                for k in range(i + 1, d + 1):
                    rhs = rhs + _triple(g.e_prime(i, k), g.Dinv[k], g.f_prime(k, i), tb)
            elif i < j:
                rhs = g.e_prime(i, j).mul(g.Dinv[j], tb)
                for k in range(j + 1, d + 1):
                    rhs = rhs + _triple(g.e_prime(i, k), g.Dinv[k], g.f_prime(k, j), tb)
            else:
                # row i > column j: t'_ij = d_i^-1 f'_ij + sum_{k>i} e'_ik d_k^-1 f'_kj
                rhs = g.Dinv[i].mul(g.f_prime(i, j), tb)
                for k in range(i + 1, d + 1):
                    rhs = rhs + _triple(g.e_prime(i, k), g.Dinv[k], g.f_prime(k, j), tb)
            return series_outcome(Ti[i, j], rhs, tb)

        return run

    for i in range(1, d + 1):
        for j in range(1, d + 1):
            kind = "diag" if i == j else ("upper" if i < j else "lower")
            checks.append(Check(f"gauss_t_{kind}", ANCHOR_EXPAND, {**base, "ij": [i, j]}, expand_t(i, j)))
            checks.append(Check(f"gauss_tprime_{kind}", ANCHOR_EXPAND, {**base, "ij": [i, j]}, expand_tp(i, j)))
    return checks


def verify_inverse_factors(g: GaussData, table) -> list[Check]:
    """E * E' = 1 and F' * F = 1 with E', F' from the chain sums."""
    d = g.size
    base = {"m": g.ctx.m, "n": g.ctx.n, "sign": g.sign}

    def run():
        one = TruncSeries.constant(g.ctx, g.direction, 1, g.order)
        zero = TruncSeries.constant(g.ctx, g.direction, 0, g.order)
        ep = lambda i, j: g.e_prime(i, j) if i < j else (one if i == j else zero)
        fp = lambda i, j: g.f_prime(i, j) if i > j else (one if i == j else zero)
        e = lambda i, j: g.E[i, j] if i < j else (one if i == j else zero)
        f = lambda i, j: g.F[i, j] if i > j else (one if i == j else zero)
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                target = one if i == j else zero
                pe = series_dot([(e(i, k), ep(k, j)) for k in range(1, d + 1)], table)
                pf = series_dot([(fp(i, k), f(k, j)) for k in range(1, d + 1)], table)
                for which, got in (("E", pe), ("F", pf)):
                    out = series_outcome(got, target, table)
                    if not out.passed:
                        return Outcome(False, out.counterexample, {"factor": which, "entry": [i, j], **out.detail})
        return Outcome(True)

    return [Check("gauss_inverse_factors", ANCHOR_EINV, base, run)]


def d_coefficients(g: GaussData, target: AlgebraContext) -> dict[tuple[int, int], object]:
    """{(i, r): d_i^(±r)} for r = 1..target.N, read from data computed at H+1."""
    out = {}
    top = target.N
    for i in range(1, g.size + 1):
        for r in range(1, top + 1):
            if g.sign == "+" and r - 1 > g.order:
                continue
            out[i, r] = coefficient(g.D[i], g.sign, r, target)
    return out


def verify_d_commute(gm: GaussData, gp: GaussData, table, target: AlgebraContext | None = None) -> list[Check]:
    """[d_i^(±r), d_j^(±s)] = 0 for the sign pairs (-,-), (+,+), (-,+).

    ``gm`` and ``gp`` must be computed one h-order above ``target`` so the
    coefficients are exact there.
    """
    if target is None:
        target = gm.ctx.with_orders(H=gm.ctx.H - 1)
    cm = d_coefficients(gm, target)
    cp = d_coefficients(gp, target)
    d = gm.size
    tt = table
    checks = []
    for pair, A, B in (("--", cm, cm), ("++", cp, cp), ("-+", cm, cp)):
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                if pair != "-+" and j < i:
                    continue

                def run(A=A, B=B, i=i, j=j):
                    for (ii, r), x in sorted(A.items()):
                        if ii != i:
                            continue
                        for (jj, s), y in sorted(B.items()):
                            if jj != j:
                                continue
                            out = element_outcome(tt.mul(x, y) - tt.mul(y, x), tt)
                            if not out.passed:
                                return Outcome(False, out.counterexample, {"r": r, "s": s})
                    return Outcome(True)

                checks.append(
                    Check("d_commute", ANCHOR_DCOMM, {"m": target.m, "n": target.n, "signs": pair, "ij": [i, j]}, run)
                )
    return checks


__all__ = [
    "GaussData",
    "gauss_decompose",
    "drinfeld_series",
    "inverse_gauss_series",
    "verify_gauss_identities",
    "verify_inverse_factors",
    "verify_d_commute",
    "d_coefficients",
]
