from __future__ import annotations

import pytest

from dyber import AlgebraContext, UsageError, shared_table
from dyber.berezinian import (
    berezinian_checks,
    berezinian_direct,
    berezinian_factored,
    centrality_checks,
    classical_limit_checks,
    delta_checks,
    delta_series,
    independence_probe,
    padded_order,
    qdet_checks,
    quantum_determinant,
    rank_over_q,
    zeta_split_series,
)
from dyber.checks import run_checks
from dyber.coeffs import Q
from dyber.gauss import gauss_decompose
from dyber.series import generator_matrix, generator_series

CAP = 12


def tables(c):
    return shared_table(c.m, c.n, CAP)


def _padded(ctx):
    return {s: gauss_decompose(ctx, s, tables(ctx), padded_order(ctx, s)) for s in "-+"}


def _bdata(ctx):
    return {s: berezinian_direct(ctx, s, tables(ctx), with_coefficients=True) for s in "-+"}


@pytest.mark.parametrize("sign", "-+")
def test_qdet_size_one(sign):
    ctx = AlgebraContext(2, 1, 2, 2)
    tb = tables(ctx)
    assert quantum_determinant(ctx, sign, 1, tb) == generator_series(ctx, sign, 1, 1).reduce(tb)


def test_qdet_two_by_two_formula():
    ctx = AlgebraContext(2, 0, 3, 3)
    tb = tables(ctx)
    t = lambda i, j: generator_series(ctx, "-", i, j)
    expect = t(1, 1).mul(t(2, 2).shift(-1), tb) - t(2, 1).mul(t(1, 2).shift(-1), tb)
    assert quantum_determinant(ctx, "-", 2, tb) == expect


def test_qdet_out_of_range():
    ctx = AlgebraContext(2, 1, 2, 2)
    with pytest.raises(UsageError):
        quantum_determinant(ctx, "-", 3, tables(ctx))


@pytest.mark.parametrize("mn", [(2, 0), (2, 1)])
def test_qdet_factored(mn):
    ctx = AlgebraContext(*mn, 2, 2)
    res = run_checks(qdet_checks(ctx, tables(ctx), _padded(ctx)))
    assert len(res) == 2 * mn[0] and all(o.passed for _, o in res)


@pytest.mark.parametrize("sign", "-+")
def test_ber_gl10_is_t11(sign):
    ctx = AlgebraContext(1, 0, 2, 3)
    b = berezinian_direct(ctx, sign, tables(ctx)).series
    assert b == generator_series(ctx, sign, 1, 1)


@pytest.mark.parametrize("sign", "-+")
def test_ber_gl01_is_shifted_inverse_entry(sign):
    # with m = 0 the first argument u - (m-1)h of the t' factor is u + h
    ctx = AlgebraContext(0, 1, 2, 3)
    tb = tables(ctx)
    b = berezinian_direct(ctx, sign, tb).series
    tinv = generator_matrix(ctx, sign, 6).inverse(tb)[1, 1]
    assert b == tinv.shift(1).truncate(3)


def test_ber_gl11_minus_definition():
    ctx = AlgebraContext(1, 1, 2, 2)
    tb = tables(ctx)
    T = generator_matrix(ctx, "-")
    expect = T[1, 1].mul(T.inverse(tb)[2, 2], tb)
    assert berezinian_direct(ctx, "-", tb).series == expect


def test_ber_gl11_plus_is_d_ratio():
    ctx = AlgebraContext(1, 1, 2, 2)
    tb = tables(ctx)
    g = gauss_decompose(ctx, "+", tb, padded_order(ctx, "+"))
    assert berezinian_factored(g, tb).series == g.D[1].mul(g.Dinv[2], tb).truncate(ctx.N)


@pytest.mark.parametrize("mn", [(1, 1), (0, 1), (1, 0)])
@pytest.mark.parametrize("sign", "-+")
def test_zeta_split(mn, sign):
    ctx = AlgebraContext(*mn, 2, 2)
    tb = tables(ctx)
    assert zeta_split_series(ctx, sign, tables).reduce(tb) == berezinian_direct(ctx, sign, tb).series


def test_ber_checks_gl21():
    ctx = AlgebraContext(2, 1, 2, 2)
    res = run_checks(berezinian_checks(ctx, tables, _padded(ctx)))
    assert {c.label for c, _ in res} == {"ber_factored", "ber_zeta_split"}
    assert all(o.passed for _, o in res)


def test_coefficients_are_exact_and_unit_constant():
    ctx = AlgebraContext(1, 1, 2, 2)
    bd = _bdata(ctx)
    for s in "-+":
        assert bd[s].series.coeffs[0].terms.get((0, ())) == 1
        assert sorted(bd[s].coefficients) == [1, 2]
        assert all(c.ctx == ctx for c in bd[s].coefficients.values())


@pytest.mark.parametrize("mn", [(1, 0), (1, 1)])
def test_centrality(mn):
    ctx = AlgebraContext(*mn, 2, 2)
    res = run_checks(centrality_checks(ctx, tables(ctx), _bdata(ctx)))
    assert res and all(o.passed for _, o in res)


def test_classical_limit_gl11():
    ctx = AlgebraContext(1, 1, 2, 3)
    tb = tables(ctx)
    bd = _bdata(ctx)
    for s in "-+":
        lin = tb.normalize(bd[s].coefficients[1]).h_part(0)
        assert lin == ctx.gen(s, 1, 1, 1) - ctx.gen(s, 1, 2, 2)
    assert all(o.passed for _, o in run_checks(classical_limit_checks(ctx, tb, bd)))


def test_independence_rank():
    ctx = AlgebraContext(1, 1, 2, 2)
    bd = _bdata(ctx)
    assert independence_probe(ctx, tables(ctx), bd, 1) == {"monomials": 6, "rank": 6}
    assert independence_probe(ctx, tables(ctx), bd, 0) == {"monomials": 1, "rank": 1}
    with pytest.raises(UsageError):
        independence_probe(ctx, tables(ctx), bd, 3)


def test_rank_over_q():
    assert rank_over_q([{1: 1, 2: 2}, {1: 2, 2: 4}, {3: Q(1, 3)}]) == 2
    assert rank_over_q([]) == 0


@pytest.mark.parametrize("sign", "-+")
def test_delta_n1_is_inverse_ber(sign):
    ctx = AlgebraContext(1, 1, 2, 2)
    tb = tables(ctx)
    g = gauss_decompose(ctx, sign, tb)
    delta = delta_series(g, tb)[1]
    assert delta.inverse(tb) == berezinian_direct(ctx, sign, tb).series


@pytest.mark.parametrize("n", [1, 2])
def test_delta_checks(n):
    ctx = AlgebraContext(n, n, 2, 2)
    hi = ctx.with_orders(H=3)
    gp_hi = {s: gauss_decompose(hi, s, tables(ctx), padded_order(hi, s)) for s in "-+"}
    res = run_checks(delta_checks(ctx, tables, _padded(ctx), gp_hi, _bdata(ctx)))
    assert len(res) == 6 and all(o.passed for _, o in res)


def test_delta_needs_square():
    ctx = AlgebraContext(2, 1, 2, 2)
    with pytest.raises(UsageError):
        delta_checks(ctx, tables, {}, {}, {})
