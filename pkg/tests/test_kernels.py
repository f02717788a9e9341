from __future__ import annotations

import random

import pytest

from dyber import AlgebraContext, _pykernels, shared_table
from dyber.rtt import random_word

try:
    from dyber import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def test_selected_implementation_is_reported():
    from dyber import IMPLEMENTATION

    assert IMPLEMENTATION in ("python", "cython")


@needs_ext
def test_mul_terms_agree():
    ctx = AlgebraContext(2, 1, 3, 3)
    rng = random.Random(4)
    for _ in range(30):
        a = random_word(ctx, rng, 3, 3) + random_word(ctx, rng, 3, 3).scale(2, 1)
        b = random_word(ctx, rng, 3, 3).scale(-1, 2) + random_word(ctx, rng, 2, 2)
        for H in (0, 1, 3):
            assert _ckernels.mul_terms(dict(a.terms), dict(b.terms), H) == _pykernels.mul_terms(dict(a.terms), dict(b.terms), H)


@needs_ext
@pytest.mark.parametrize("mn", [(1, 1), (2, 1)])
def test_normalizers_agree(mn):
    m, n = mn
    ctx = AlgebraContext(m, n, 2, 2)
    table = shared_table(m, n, 12)
    rule = table._rule_terms
    py = _pykernels.Normalizer(m, rule)
    cy = _ckernels.Normalizer(m, rule)
    rng = random.Random(9)
    for _ in range(40):
        w = random_word(ctx, rng, 4, 2)
        assert py.normalize_terms(dict(w.terms), 2) == cy.normalize_terms(dict(w.terms), 2)
    a = dict(table.normalize(random_word(ctx, rng, 3, 2)).terms)
    b = dict(table.normalize(random_word(ctx, rng, 3, 2)).terms)
    assert py.mul_normal(a, b, 2) == cy.mul_normal(a, b, 2)
