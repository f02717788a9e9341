from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyber import AlgebraContext, Element, ParseError, parse, serialize
from dyber.algebra import DomainError, decode, encode, supercomm
from dyber.coeffs import Q

CTX = AlgebraContext(2, 1, 3, 3)


def test_grammar_instance():
    assert serialize(CTX.gen("-", 1, 1, 2)) == "t[-1;1,2]"
    assert serialize(CTX.zero()) == "0"
    assert serialize(CTX.scalar(Q(-3, 2), 2)) == "-3/2 h^2"


def test_encode_decode():
    for sign in "+-":
        for r in (1, 5, 40):
            for i in (1, 3):
                code = encode(sign, r, i, 2)
                assert decode(code) == (sign, r, i, 2)


def test_gen_out_of_range():
    with pytest.raises(DomainError):
        CTX.gen("-", 1, 4, 1)
    with pytest.raises(DomainError):
        CTX.gen("+", 0, 1, 1)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as e:
        parse("t[-1;1,2] + + t[-1;1,1]", CTX)
    assert e.value.pos == 12
    with pytest.raises(ParseError):
        parse("t[-1;1,2] x", CTX)
    with pytest.raises(ParseError):
        parse("t[-1;1,2] +", CTX)
    with pytest.raises(ParseError):
        parse("", CTX)


def test_parse_whitespace_and_unicode_minus():
    a = parse(" 2 h^1 t[ - 1 ; 1 , 2 ]  −  t[+2;3,3] ", CTX)
    assert a == CTX.gen("-", 1, 1, 2).scale(2, 1) - CTX.gen("+", 2, 3, 3)


def test_parse_drops_high_h():
    assert parse("h^4 t[-1;1,1]", CTX) == CTX.zero()


def test_odd_generators_anticommute_freely():
    x, y = CTX.gen("-", 1, 1, 3), CTX.gen("-", 1, 3, 2)
    assert x.parity() == 1 and y.parity() == 1
    # supercomm of odd elements is the anticommutator in the free algebra
    assert supercomm(x, y) == x * y + y * x


gens = st.builds(
    lambda s, r, i, j: CTX.gen(s, r, i, j),
    st.sampled_from("+-"),
    st.integers(1, 3),
    st.integers(1, 3),
    st.integers(1, 3),
)


@st.composite
def elements(draw):
    out = CTX.zero()
    for _ in range(draw(st.integers(0, 4))):
        word = CTX.one()
        for g in draw(st.lists(gens, max_size=3)):
            word = word * g
        q = Q(draw(st.integers(-5, 5)), draw(st.integers(1, 4)))
        out = out + word.scale(q, draw(st.integers(0, 3)))
    return out


@settings(max_examples=150, deadline=None)
@given(elements())
def test_serialize_parse_roundtrip(a):
    text = serialize(a)
    assert parse(text, CTX) == a
    assert serialize(parse(text, CTX)) == text


@settings(max_examples=60, deadline=None)
@given(elements(), elements(), elements())
def test_free_product_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=60, deadline=None)
@given(elements())
def test_truncation_is_h_adic(a):
    h3 = a.hmul(3)
    assert all(k <= CTX.H for (k, _) in h3.terms)
    assert a.hmul(4) == CTX.zero()
    assert Element.from_terms(CTX, dict(a.terms)) == a
