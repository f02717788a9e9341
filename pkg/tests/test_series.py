from __future__ import annotations

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from dyber import AlgebraContext, TruncSeries
from dyber.coeffs import Q
from dyber.series import (
    DOWN,
    FREE,
    UP,
    SeriesMatrix,
    SingularityError,
    generator_matrix,
    generator_series,
    parse_series,
    quasidet,
    serialize_series,
)

CTX = AlgebraContext(1, 1, 3, 4)
SC = AlgebraContext(1, 0, 3, 6)  # scalar-only series live here


def _scalar_series(direction, coeffs):
    """coeffs[k] = {hpow: rational}."""
    return TruncSeries(SC, direction, [sum((SC.scalar(q, k) for k, q in c.items()), SC.zero()) for c in coeffs])


def _to_sympy(s: TruncSeries, u, h):
    out = sp.Integer(0)
    for k, c in enumerate(s.coeffs):
        for (hp, w), q in c.terms.items():
            assert not w
            pw = -k if s.direction == DOWN else k
            out += sp.Rational(int(q.numerator), int(q.denominator)) * h**hp * u**pw
    return out


def _from_sympy(expr, direction, order, u, h):
    expr = sp.expand(sp.sympify(expr))
    coeffs = []
    for k in range(order + 1):
        pw = -k if direction == DOWN else k
        ck = expr.coeff(u, pw)
        c = {}
        for hp in range(SC.H + 1):
            q = ck.coeff(h, hp) if hp else ck.subs(h, 0)
            if q != 0:
                c[hp] = Q(int(sp.fraction(q)[0]), int(sp.fraction(q)[1]))
        coeffs.append(c)
    return _scalar_series(direction, coeffs)


rationals = st.builds(lambda a, b: Q(a, b), st.integers(-6, 6), st.integers(1, 3))
coeff_maps = st.dictionaries(st.integers(0, 3), rationals, max_size=3)


@settings(max_examples=40, deadline=None)
@given(st.lists(coeff_maps, min_size=7, max_size=7), st.integers(-2, 2))
def test_down_shift_matches_sympy(cs, c):
    u, h, x = sp.symbols("u h x")
    s = _scalar_series(DOWN, cs)
    # oracle: substitute u = 1/x and expand (1/x + c h)^-r = x^r (1 + c h x)^-r
    expr = 0
    for r, cm in enumerate(cs):
        for hp, q in cm.items():
            term = sp.Rational(int(q.numerator), int(q.denominator)) * h**hp * x**r * (1 + c * h * x) ** (-r)
            expr += sp.series(term, x, 0, 7).removeO()
    expr = sp.expand(expr).subs(x, 1 / u)
    expr = sum(t for t in sp.Add.make_args(sp.expand(expr)) if sp.degree(t, h) <= SC.H)
    assert s.shift(c) == _from_sympy(expr, DOWN, 6, u, h)


@settings(max_examples=40, deadline=None)
@given(st.lists(coeff_maps, min_size=7, max_size=7), st.integers(-2, 2))
def test_up_shift_matches_sympy(cs, c):
    u, h = sp.symbols("u h")
    s = _scalar_series(UP, cs)
    expr = sp.expand(_to_sympy(s, u, h).subs(u, u + c * h))
    expr = sum(t for t in sp.Add.make_args(expr) if sp.degree(t, h) <= SC.H)
    got = s.shift(c)
    assert got.order == 6 - SC.H
    assert got == _from_sympy(expr, UP, got.order, u, h)


def test_shift_composes_on_down_series():
    s = generator_series(CTX, "-", 1, 2)
    assert s.shift(1).shift(1) == s.shift(2)
    assert s.shift(1).shift(-1) == s


@pytest.mark.parametrize("sign", "-+")
def test_inverse_free(sign):
    s = generator_series(CTX, sign, 1, 1)
    one = TruncSeries.constant(CTX, s.direction, 1, s.order)
    assert s.mul(s.inverse()) == one
    assert s.inverse().mul(s) == one


def test_inverse_needs_unit_constant():
    s = generator_series(CTX, "-", 1, 2)
    with pytest.raises(SingularityError):
        s.inverse()


@pytest.mark.parametrize("sign", "-+")
def test_series_text_roundtrip(sign):
    s = generator_series(CTX, sign, 2, 1).mul(generator_series(CTX, sign, 1, 2))
    assert parse_series(serialize_series(s), CTX) == s
    assert serialize_series(s).startswith(f"dir={'down' if sign == '-' else 'up'}; N={CTX.N}; c0=")


@pytest.mark.parametrize("sign", "-+")
def test_matrix_inverse_free(sign):
    ctx = AlgebraContext(1, 1, 2, 2)
    T = generator_matrix(ctx, sign)
    Ti = T.inverse()
    eye = SeriesMatrix.identity(ctx, T.direction, 2, T.order)
    for P in (T.matmul(Ti), Ti.matmul(T)):
        assert all(P[i, j] == eye[i, j] for i in (1, 2) for j in (1, 2))


def test_quasidet_2x2_formula():
    # |A|_22 = a22 - a21 a11^-1 a12, and it inverts the (2,2) entry of A^-1
    ctx = AlgebraContext(2, 0, 2, 2)
    A = generator_matrix(ctx, "-")
    q = quasidet(A, 2, 2)
    direct = A[2, 2] - A[2, 1].mul(A[1, 1].inverse()).mul(A[1, 2])
    assert q == direct
    one = TruncSeries.constant(ctx, DOWN, 1, A.order)
    assert A.inverse()[2, 2].mul(q) == one
