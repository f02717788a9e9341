from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from dyber import AlgebraContext
from dyber.classical import ClassicalElement, classical_image

M, N = 2, 1

syms = st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(-2, 2))


def E(s):
    return ClassicalElement.basis(M, N, *s)


def _sign(x, y):
    p = E(x).sym_parity(x) & E(y).sym_parity(y)
    return -1 if p else 1


@settings(max_examples=80, deadline=None)
@given(syms, syms)
def test_super_antisymmetry(x, y):
    a, b = E(x), E(y)
    assert a.supercomm(b) == b.supercomm(a).scale(-_sign(x, y))


@settings(max_examples=80, deadline=None)
@given(syms, syms, syms)
def test_super_jacobi(x, y, z):
    # [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
    a, b, c = E(x), E(y), E(z)
    lhs = a.supercomm(b.supercomm(c))
    rhs = a.supercomm(b).supercomm(c) + b.supercomm(a.supercomm(c)).scale(_sign(x, y))
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(st.lists(syms, min_size=1, max_size=4), st.lists(syms, min_size=1, max_size=3))
def test_pbw_product_associative(u, v):
    a = ClassicalElement.scalar(M, N, 1)
    for s in u:
        a = a * E(s)
    b = ClassicalElement.scalar(M, N, 1)
    for s in v:
        b = b * E(s)
    assert (a * b) * a == a * (b * a)


def test_identity_loop_is_central():
    I = ClassicalElement.identity_loop(M, N, -1)
    for i in range(1, 4):
        for j in range(1, 4):
            for r in (-2, 0, 3):
                assert not I.supercomm(E((i, j, r)))


def test_classical_image_signs():
    ctx = AlgebraContext(1, 1, 1, 2)
    assert classical_image(ctx.gen("-", 2, 1, 2)) == ClassicalElement.basis(1, 1, 1, 2, 1)
    assert classical_image(ctx.gen("+", 1, 2, 2)) == ClassicalElement.basis(1, 1, 2, 2, -1).scale(-1)
    assert classical_image(ctx.gen("-", 1, 1, 1).hmul(1)) == ClassicalElement(1, 1)
