from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsphere.scalars import HalfInt
from qsphere.uq import UqAlgebra, antipode, antipode_inverse, coproduct, counit, represent, sigma, spin_generators, star

ALG = UqAlgebra.exact(Fraction(1, 2))
NUM = UqAlgebra.numeric(0.5)

monomials = st.tuples(st.integers(0, 2), st.integers(-2, 2), st.integers(0, 2), st.integers(-3, 3).filter(bool))
elements = st.lists(monomials, min_size=1, max_size=3)


def build(alg, spec):
    x = alg.element()
    for i, n, j, c in spec:
        x = x + alg.monomial(i, n, j, coeff=c)
    return x


def test_defining_relations():
    e, f, k, kinv = ALG.e, ALG.f, ALG.k, ALG.kinv
    one = ALG.scalars.one
    q = ALG.scalars.q
    assert k * e * kinv == e * (one / q)
    assert k * f * kinv == f * q
    assert e * f - f * e == (kinv * kinv - k * k) * (one / (q - one / q))


def test_generator_hopf_data():
    e, f, k = ALG.e, ALG.f, ALG.k
    q = ALG.scalars.q
    one = ALG.scalars.one
    assert counit(e) == ALG.scalars.zero and counit(k) == one
    assert antipode(e) == e * (-one / q)
    assert antipode(f) == f * (-q)
    assert antipode(k) == ALG.kinv
    assert star(f) == e and star(k) == k


@given(elements, elements)
def test_coproduct_is_multiplicative(xs, ys):
    x, y = build(ALG, xs), build(ALG, ys)
    assert coproduct(x * y) == coproduct(x) * coproduct(y)


@given(elements)
def test_antipode_axiom(xs):
    x = build(ALG, xs)
    left = ALG.element()
    right = ALG.element()
    for c, h1, h2 in coproduct(x).legs():
        left = left + antipode(h1) * h2 * c
        right = right + h1 * antipode(h2) * c
    assert left == ALG.one * counit(x)
    assert right == ALG.one * counit(x)


@given(elements, elements)
def test_antipode_and_star(xs, ys):
    x, y = build(ALG, xs), build(ALG, ys)
    assert antipode_inverse(antipode(x)) == x
    assert antipode(x * y) == antipode(y) * antipode(x)
    assert star(star(x)) == x
    assert star(x * y) == star(y) * star(x)
    # (S ∘ *)^2 = id
    assert star(antipode(star(antipode(x)))) == x


@given(st.integers(0, 8), st.floats(0.1, 0.9))
def test_spin_generators_satisfy_relations(l2, q):
    E, F, K = spin_generators(l2, q)
    Ki = np.diag(1 / np.diag(K))
    assert np.allclose(K @ E @ Ki, E / q)
    assert np.allclose(K @ F @ Ki, q * F)
    assert np.allclose(E @ F - F @ E, (Ki @ Ki - K @ K) / (q - 1 / q))
    assert np.allclose(E.T, F)


@given(elements, st.integers(0, 4))
def test_sigma_is_star_representation(xs, l2):
    x = build(NUM, xs)
    assert np.allclose(sigma(star(x), HalfInt(l2)), sigma(x, HalfInt(l2)).conj().T)


@given(elements, elements)
def test_sigma_is_multiplicative(xs, ys):
    x, y = build(NUM, xs), build(NUM, ys)
    for l2 in (1, 2, 3):
        assert np.allclose(sigma(x * y, HalfInt(l2)), sigma(x, HalfInt(l2)) @ sigma(y, HalfInt(l2)))


def test_spin_half_matrices():
    # order |½,−½>, |½,½>; e lowers m
    E, F, K = spin_generators(1, 0.5)
    assert np.allclose(E, [[0, 1], [0, 0]])
    assert np.allclose(F, [[0, 0], [1, 0]])
    assert np.allclose(K, np.diag([2**0.5, 2**-0.5]))  # k = q^m


def test_represent_coproduct_on_tensor():
    E, F, K = spin_generators(1, 0.5)
    for h in (NUM.e, NUM.f, NUM.k, NUM.e * NUM.f):
        big = sum(complex(c) * np.kron(sigma(h1, HalfInt(1)), sigma(h2, HalfInt(1)))
                  for c, h1, h2 in coproduct(h).legs())
        # Δ is an algebra map, so images of generators determine the rest
        E2, F2, K2 = (sum(complex(c) * np.kron(sigma(a, HalfInt(1)), sigma(b, HalfInt(1)))
                          for c, a, b in coproduct(g).legs()) for g in (NUM.e, NUM.f, NUM.k))
        assert np.allclose(big, represent(h, E2, F2, K2))
