from __future__ import annotations

import pytest

from dyber import AlgebraContext, shared_table
from dyber.checks import run_checks
from dyber.gauss import (
    drinfeld_series,
    gauss_decompose,
    verify_d_commute,
    verify_gauss_identities,
    verify_inverse_factors,
)
from dyber.series import TruncSeries, generator_series


def _table(ctx):
    return shared_table(ctx.m, ctx.n, 10)


@pytest.mark.parametrize("mn", [(1, 1), (2, 0), (0, 2)])
@pytest.mark.parametrize("sign", "-+")
def test_ldu_oracle_2x2(mn, sign):
    # the 2x2 factorization written out by hand:
    #   d1 = t11, e = t11^-1 t12, f = t21 t11^-1, d2 = t22 - t21 t11^-1 t12
    ctx = AlgebraContext(*mn, 2, 2)
    tb = _table(ctx)
    t = {(i, j): generator_series(ctx, sign, i, j) for i in (1, 2) for j in (1, 2)}
    inv11 = t[1, 1].inverse(tb)
    g = gauss_decompose(ctx, sign, tb)
    assert g.D[1] == t[1, 1].reduce(tb)
    assert g.E[1, 2] == inv11.mul(t[1, 2], tb)
    assert g.F[2, 1] == t[2, 1].mul(inv11, tb)
    assert g.D[2] == (t[2, 2] - t[2, 1].mul(inv11, tb).mul(t[1, 2], tb)).reduce(tb)


def test_fde_product_by_hand_gl21():
    ctx = AlgebraContext(2, 1, 2, 2)
    tb = _table(ctx)
    g = gauss_decompose(ctx, "-", tb)
    zero = TruncSeries.constant(ctx, "down", 0, ctx.N)
    one = TruncSeries.constant(ctx, "down", 1, ctx.N)

    def F(i, j):
        return one if i == j else (g.F[i, j] if i > j else zero)

    def E(i, j):
        return one if i == j else (g.E[i, j] if i < j else zero)

    for i in range(1, 4):
        for j in range(1, 4):
            acc = zero
            for k in range(1, 4):
                acc = acc + F(i, k).mul(g.D[k], tb).mul(E(k, j), tb)
            assert acc.reduce(tb) == generator_series(ctx, "-", i, j).reduce(tb)


@pytest.mark.parametrize("mn", [(1, 1), (2, 1), (1, 2)])
@pytest.mark.parametrize("sign", "-+")
def test_gauss_identity_checks(mn, sign):
    ctx = AlgebraContext(*mn, 2, 2)
    g = gauss_decompose(ctx, sign, _table(ctx))
    results = run_checks(verify_gauss_identities(g, _table(ctx)) + verify_inverse_factors(g, _table(ctx)))
    assert [c.label for c, o in results if not o.passed] == []
    labels = {c.label for c, _ in results}
    assert "gauss_fde" in labels


def test_drinfeld_series_names():
    ctx = AlgebraContext(2, 1, 2, 2)
    g = gauss_decompose(ctx, "-", _table(ctx))
    assert drinfeld_series(g, "e", 1) is g.E[1, 2]
    assert drinfeld_series(g, "f", 2) is g.F[3, 2]
    with pytest.raises(IndexError):
        drinfeld_series(g, "d", 4)


@pytest.mark.parametrize("mn", [(1, 1), (2, 1)])
def test_d_commute(mn):
    ctx = AlgebraContext(*mn, 2, 2)
    hi = ctx.with_orders(H=3)
    tb = _table(ctx)
    checks = verify_d_commute(gauss_decompose(hi, "-", tb), gauss_decompose(hi, "+", tb), tb, ctx)
    assert {c.params["signs"] for c in checks} == {"--", "++", "-+"}
    assert all(o.passed for _, o in run_checks(checks))
