from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsphere.coord import CoordAlgebra, act_left, act_right, coord_counit, embed_podles, haar, inner_product, star
from qsphere.uq import coproduct, counit

EX = CoordAlgebra.exact(Fraction(1, 2))
NUM = CoordAlgebra.numeric(0.5)

words = st.lists(st.lists(st.integers(0, 3), max_size=3), min_size=1, max_size=3)
coeffs = st.integers(-3, 3).filter(bool)


def build(alg, spec, cs=None):
    letters = [alg.a, alg.astar, alg.b, alg.bstar]
    x = alg.element()
    for i, w in enumerate(spec):
        term = alg.one
        for letter in w:
            term = term * letters[letter]
        x = x + term * alg.scalars((cs or [1] * len(spec))[i % len(cs or [1])])
    return x


def test_relations_exact():
    a, b, ast, bst, one = EX.a, EX.b, EX.astar, EX.bstar, EX.one
    q = EX.scalars.q
    zero = EX.element()
    assert b * a - a * b * q == zero
    assert bst * a - a * bst * q == zero
    assert b * bst - bst * b == zero
    assert a * ast + b * bst - one == zero
    assert ast * a + bst * b * (q * q) - one == zero


# ψ((bb*)^n) = (1 − q²)/(1 − q^{2n+2}) at q = 1/2
HAAR_AT_HALF = [Fraction(1), Fraction(4, 5), Fraction(16, 21), Fraction(64, 85), Fraction(256, 341)]


@pytest.mark.parametrize("n", range(5))
def test_haar_closed_form(n):
    zeta = EX.b * EX.bstar
    assert EX.scalars.to_sympy(haar(zeta**n)) == HAAR_AT_HALF[n]


@given(words)
def test_haar_is_invariant(spec):
    x = build(EX, spec)
    U = EX.uq
    for h in (U.e, U.f, U.k):
        assert haar(act_left(h, x)) == counit(h) * haar(x)


@given(words, words)
def test_left_action_is_module_algebra(s1, s2):
    x, y = build(EX, s1), build(EX, s2)
    U = EX.uq
    for h in (U.e, U.f, U.k):
        total = EX.element()
        for c, h1, h2 in coproduct(h).legs():
            total = total + act_left(h1, x) * act_left(h2, y) * c
        assert act_left(h, x * y) == total


@given(words)
def test_actions_commute(spec):
    x = build(EX, spec)
    U = EX.uq
    for h in (U.e, U.f, U.k):
        for g in (U.e, U.f, U.k):
            assert act_left(h, act_right(x, g)) == act_right(act_left(h, x), g)


@given(words, st.lists(coeffs, min_size=1, max_size=3))
def test_inner_product_positive(spec, cs):
    x = build(NUM, spec, cs)
    value = complex(inner_product(x, x))
    assert value.real >= -1e-12 and abs(value.imag) < 1e-12


@given(words, words)
def test_star_and_counit(s1, s2):
    x, y = build(EX, s1), build(EX, s2)
    assert star(x * y) == star(y) * star(x)
    assert coord_counit(x * y) == coord_counit(x) * coord_counit(y)


@pytest.mark.parametrize("c", [0.0, 1.0, 3.0, float("inf")])
def test_podles_embedding_relations(c):
    q = 0.5
    A, B, Bs = (embed_podles(n, c, NUM) for n in ("A", "B", "B*"))
    assert (B * A - A * B * (q * q)).is_close(NUM.element())
    assert (star(A) - A).is_close(NUM.element())
    assert (star(B) - Bs).is_close(NUM.element())
    if c == float("inf"):
        assert (Bs * B + A * A - NUM.one).is_close(NUM.element())
        assert (B * Bs + A * A * q**4 - NUM.one).is_close(NUM.element())
    else:
        assert (Bs * B - A + A * A - NUM.one * c).is_close(NUM.element())
        assert (B * Bs - A * (q * q) + A * A * q**4 - NUM.one * c).is_close(NUM.element())
